from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import brute_is_pa
from poset_amalgam.amalgam import amalgam_exists, jep_join, verify_amalgam
from poset_amalgam.errors import TypeMismatch
from poset_amalgam.generators import (cuts, make_rng, random_lemma_input, random_pa,
                                      random_pa_extension)
from poset_amalgam.lemma1 import claim_check, insert_midpoint, lemma1_extend
from poset_amalgam.partial_auto import (PaEmbedding, PaPair, extend_by_pair, is_pa,
                                        is_pa_extension)
from poset_amalgam.poset import Embedding, is_extension, make_poset, push_forward, qf_type
from poset_amalgam.witness import Word, base_pair, eval_word

relaxed = settings(max_examples=60, deadline=None,
                   suppress_health_check=[HealthCheck.too_slow])


@st.composite
def posets(draw, max_size=5):
    n = draw(st.integers(0, max_size))
    perm = draw(st.permutations(range(n)))
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return make_poset(range(n), [p for p, k in zip(pairs, keep) if k])


@st.composite
def pa_pairs(draw, max_size=5):
    P = draw(posets(max_size))
    seed = draw(st.integers(0, 2**32))
    rng = make_rng(seed)
    return PaPair(P, random_pa(P, rng), random_pa(P, rng))


@relaxed
@given(posets())
def test_order_axioms(P):
    P.check()
    for a in P.elements:
        assert not P.less(a, a)


@relaxed
@given(posets(4), st.data())
def test_every_cut_is_a_one_point_extension(P, data):
    options = list(cuts(P))
    below, above = data.draw(st.sampled_from(options))
    Q, v = P.add_point(below, above)
    assert is_extension(P, Q)
    assert Q.down(v) == below and Q.up(v) == above


@relaxed
@given(pa_pairs(), st.data())
def test_fact1_biconditional(p, data):
    h = p.f
    c = data.draw(st.sampled_from(p.poset.elements)) if len(p.poset) else None
    d = data.draw(st.sampled_from(p.poset.elements)) if len(p.poset) else None
    if c is None or c in h.dom or d in h.rng:
        return
    try:
        extend_by_pair(h, c, d)
        ok = True
    except TypeMismatch:
        ok = False
    assert ok == brute_is_pa(p.poset, h.map | {(c, d)})


@relaxed
@given(pa_pairs(), st.data())
def test_types_survive_round_trip(p, data):
    h = p.f
    if not h.dom or not p.poset.elements:
        return
    c = data.draw(st.sampled_from(p.poset.elements))
    t = qf_type(c, h.dom, p.poset)
    alpha = h.as_embedding()
    inverse = Embedding(p.poset.restrict(h.rng), p.poset, {b: a for a, b in alpha.map.items()})
    assert push_forward(push_forward(t, alpha), inverse) == t


@relaxed
@given(pa_pairs(), pa_pairs())
def test_jep_join_valid(p1, p2):
    C, e1, e2 = jep_join(p1, p2)
    assert is_pa(C.poset, C.f.map) and is_pa(C.poset, C.g.map)
    assert len(C.poset) == len(p1.poset) + len(p2.poset)
    assert set(e1.map.values()).isdisjoint(e2.map.values())


@relaxed
@given(pa_pairs(3), st.integers(0, 2**32), st.integers(0, 2**32))
def test_amalgams_are_verified(A, s1, s2):
    B = random_pa_extension(A, 4, s1, max_size=len(A.poset) + 2)
    C = random_pa_extension(A, 4, s2, max_size=len(A.poset) + 2)
    eB, eC = PaEmbedding.inclusion(A, B), PaEmbedding.inclusion(A, C)
    res = amalgam_exists(A, B, C, eB, eC)
    if res is not None:
        assert verify_amalgam(res.D, res.emb_left, res.emb_right, eB, eC)
    # a structure always amalgamates with itself
    assert amalgam_exists(A, B, B, eB, eB) is not None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_lemma_postconditions(seed):
    h, s = random_lemma_input(make_rng(seed), max_size=4)
    tr = lemma1_extend(h, s, k_points=1, l_chain=2)
    assert tr.B.power(s, tr.n_final) == tr.a
    assert tr.B.poset.less(tr.a, tr.b)
    C, c = insert_midpoint(tr.B, tr.a, tr.b)
    assert claim_check(tr.B, tr.a, tr.b, C, c).ok
    assert is_extension(h.poset, tr.B.poset)


@relaxed
@given(st.integers(0, 2**32), st.integers(1, 10))
def test_random_extensions_extend(seed, steps):
    e = random_pa_extension(base_pair(), steps, seed, max_size=7)
    assert is_pa_extension(base_pair(), e)


@relaxed
@given(st.lists(st.tuples(st.sampled_from("FG"), st.integers(1, 3)), min_size=1, max_size=3),
       st.lists(st.tuples(st.sampled_from("FG"), st.integers(1, 3)), min_size=1, max_size=3))
def test_word_evaluation_composes(u, v):
    W = base_pair()
    chainy = PaPair.make(make_poset(range(8), [(i, i + 1) for i in range(7)]),
                         [(i, i + 1) for i in range(7)], [(i, i + 1) for i in range(7)])
    for pair in (W, chainy):
        wu, wv = Word(tuple(u)), Word(tuple(v))
        mid = eval_word(pair, wv, 0)
        whole = eval_word(pair, Word(tuple(u) + tuple(v)), 0)
        expect = None if mid is None else eval_word(pair, wu, mid)
        assert whole == expect
