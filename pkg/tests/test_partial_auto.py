import itertools

import pytest

from conftest import brute_is_pa
from poset_amalgam.errors import (DomainConflict, NotEmbedding, NotInjective, OrderViolation,
                                  PreconditionViolation, TypeMismatch)
from poset_amalgam.generators import all_posets, partial_automorphisms
from poset_amalgam.partial_auto import (PaEmbedding, PaPair, PartialAutomorphism,
                                        extend_by_pair, free_check_instance,
                                        free_verify_bounded, is_pa, is_pa_extension, orbit,
                                        pa_problem, validate_pa)
from poset_amalgam.poset import antichain, chain, make_poset


def test_validate_pa_errors():
    P = chain(3)
    with pytest.raises(NotInjective):
        validate_pa(P, [(0, 1), (1, 1)])
    with pytest.raises(OrderViolation):
        validate_pa(P, [(0, 1), (1, 0)])
    assert isinstance(pa_problem(P, [(0, 0), (0, 1)]), NotInjective)
    validate_pa(P, [(0, 1), (1, 2)])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_is_pa_matches_definition(n):
    for P in all_posets(n):
        els = P.elements
        for k in range(n + 1):
            for dom in itertools.combinations(els, k):
                for rng in itertools.permutations(els, k):
                    pairs = list(zip(dom, rng))
                    assert is_pa(P, pairs) == brute_is_pa(P, pairs)


def test_partial_automorphism_counts():
    # chain of 3: order-preserving partial bijections = sum_k C(3,k)^2 = 20
    assert len(partial_automorphisms(chain(3))) == 20
    # antichain of 3: all partial bijections = sum_k C(3,k)^2 k! = 34
    assert len(partial_automorphisms(antichain(3))) == 34


def test_fact1_three_elements():
    for P in all_posets(3):
        for h in partial_automorphisms(P):
            for c in P.elements:
                for d in P.elements:
                    if c in h.dom or d in h.rng:
                        continue
                    try:
                        extend_by_pair(h, c, d)
                        ok = True
                    except TypeMismatch:
                        ok = False
                    assert ok == is_pa(P, h.map | {(c, d)})


def test_extend_by_pair_domain_conflict():
    h = validate_pa(chain(3), [(0, 1)])
    with pytest.raises(DomainConflict):
        extend_by_pair(h, 0, 2)
    with pytest.raises(DomainConflict):
        extend_by_pair(h, 2, 1)


def test_orbit_and_power():
    h = validate_pa(chain(4), [(0, 1), (1, 2), (2, 3)])
    assert orbit(h, 0) == ([0, 1, 2, 3], False)
    assert h.power(0, 3) == 3 and h.power(0, 4) is None
    cyc = validate_pa(antichain(2), [(0, 1), (1, 0)])
    assert orbit(cyc, 0) == ([0, 1], True)


def test_pa_embedding_commutes(base):
    big = PaPair.make(make_poset(range(4), [(0, 1), (1, 2)]), [(0, 1), (2, 2)], [(0, 2)])
    e = PaEmbedding.inclusion(base, big)
    assert e(1) == 1
    assert is_pa_extension(base, big)
    wrong = PaPair.make(big.poset, [(0, 1)], [(0, 2)])
    with pytest.raises(NotEmbedding):
        PaEmbedding.inclusion(base, wrong)


def test_pa_embedding_compose(base):
    P = make_poset(range(4), [(0, 1), (1, 2)])
    mid = PaPair.make(P, [(0, 1), (2, 2)], [(0, 2)])
    Q = make_poset(range(5), [(0, 1), (1, 2)])
    top = PaPair.make(Q, [(0, 1), (2, 2)], [(0, 2)])
    e = PaEmbedding.inclusion(base, mid).compose(PaEmbedding.inclusion(mid, top))
    assert e.map == {0: 0, 1: 1, 2: 2}


def test_free_check_instance():
    B = validate_pa(chain(3), [(0, 1)])
    C, c = B.poset.add_point({1}, {2})
    assert free_check_instance(B, 1, 2, C, [c])
    with pytest.raises(PreconditionViolation):
        free_check_instance(B, 1, 2, C, [0])


def test_free_verify_accepts_base_interval(base):
    # f = {x->y, z->z}: any chain between y and z continues the orbit of x
    assert free_verify_bounded(base.f, 1, 2)


def test_free_verify_finds_counterexample():
    # u < a but f(u) is incomparable to a: a new point above a need not sit above f(u)
    P = make_poset(range(5), [(0, 1), (1, 2), (3, 1), (3, 2)])
    B = validate_pa(P, [(0, 1), (3, 4)])
    verdict = free_verify_bounded(B, 1, 2)
    assert not verdict
    C, pts = verdict.counterexample
    assert not is_pa(C, B.map | {(1, pts[0])})


def test_partial_automorphism_as_embedding():
    h = validate_pa(chain(3), [(0, 1), (1, 2)])
    emb = h.as_embedding()
    assert emb.map == {0: 1, 1: 2}
    assert isinstance(h, PartialAutomorphism)
