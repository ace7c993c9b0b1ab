import pytest

from poset_amalgam.amalgam import (ENV_MAX_NODES, amalgam_exists, amalgam_exists_naive,
                                   default_max_nodes, jep_join, verify_amalgam)
from poset_amalgam.errors import ResourceLimit
from poset_amalgam.generators import make_rng, random_pa_extension, random_pa_pair
from poset_amalgam.partial_auto import PaEmbedding, PaPair, is_pa
from poset_amalgam.poset import antichain, make_poset


def _triple(seed):
    rng = make_rng(seed)
    n = int(rng.integers(1, 5))
    A = random_pa_pair(n, rng)
    B = random_pa_extension(A, int(rng.integers(1, 6)), 2 * seed + 1, max_size=n + 2)
    C = random_pa_extension(A, int(rng.integers(1, 6)), 2 * seed + 2, max_size=n + 2)
    return A, B, C, PaEmbedding.inclusion(A, B), PaEmbedding.inclusion(A, C)


def test_jep_join(base):
    other = random_pa_pair(4, make_rng(3))
    C, e1, e2 = jep_join(base, other)
    assert len(C.poset) == 7
    assert is_pa(C.poset, C.f.map) and is_pa(C.poset, C.g.map)
    for u in e1.map.values():
        for v in e2.map.values():
            assert C.poset.less(u, v)


def test_self_amalgam_exists(base):
    B = PaPair.make(make_poset(range(4), [(0, 1), (1, 2), (0, 3)]), [(0, 1), (2, 2)], [(0, 2)])
    e = PaEmbedding.inclusion(base, B)
    res = amalgam_exists(base, B, B, e, e)
    assert res is not None
    assert verify_amalgam(res.D, res.emb_left, res.emb_right, e, e)


def test_conflicting_images_refuted():
    A = PaPair.make(make_poset([0]), [], [(0, 0)])
    # f(0) above 0 on one side, incomparable to 0 on the other
    B = PaPair.make(make_poset([0, 1], [(0, 1)]), [(0, 1)], [(0, 0)])
    C = PaPair.make(make_poset([0, 1]), [(0, 1)], [(0, 0)])
    eB, eC = PaEmbedding.inclusion(A, B), PaEmbedding.inclusion(A, C)
    assert amalgam_exists(A, B, C, eB, eC) is None
    assert amalgam_exists_naive(A, B, C, eB, eC) is None


def test_free_points_can_stay_apart():
    A = PaPair.make(antichain(1))
    B = PaPair.make(make_poset([0, 1], [(0, 1)]))
    C = PaPair.make(make_poset([0, 1], [(1, 0)]))
    res = amalgam_exists(A, B, C, PaEmbedding.inclusion(A, B), PaEmbedding.inclusion(A, C))
    assert res is not None and len(res.D.poset) == 3


def test_non_inclusion_embedding():
    A, B, C, eB, _ = _triple(5)
    shift = {c: c + 100 for c in C.poset.elements}
    C2 = PaPair.make(C.poset.relabel(shift), [(shift[a], shift[b]) for a, b in C.f.map],
                     [(shift[a], shift[b]) for a, b in C.g.map])
    eC2 = PaEmbedding(A, C2, {a: shift[a] for a in A.poset.elements})
    r1 = amalgam_exists(A, B, C, eB, PaEmbedding.inclusion(A, C))
    r2 = amalgam_exists(A, B, C2, eB, eC2)
    assert (r1 is None) == (r2 is None)


def test_resource_limit(base):
    B = PaPair.make(make_poset(range(5), [(0, 1), (1, 2)]), [(0, 1), (2, 2)], [(0, 2)])
    e = PaEmbedding.inclusion(base, B)
    with pytest.raises(ResourceLimit):
        amalgam_exists(base, B, B, e, e, max_nodes=0)


def test_env_budget(monkeypatch):
    monkeypatch.setenv(ENV_MAX_NODES, "17")
    assert default_max_nodes() == 17
    monkeypatch.delenv(ENV_MAX_NODES)
    assert default_max_nodes() == 10**7


@pytest.mark.parametrize("seed", range(150))
def test_matches_naive(seed):
    A, B, C, eB, eC = _triple(seed)
    fast = amalgam_exists(A, B, C, eB, eC)
    slow = amalgam_exists_naive(A, B, C, eB, eC)
    assert (fast is None) == (slow is None)
    if fast is not None:
        assert verify_amalgam(fast.D, fast.emb_left, fast.emb_right, eB, eC)
