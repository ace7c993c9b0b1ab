import itertools

import pytest

from poset_amalgam.poset import make_poset
from poset_amalgam.witness import base_pair, build_witness


def brute_is_pa(P, pairs):
    """Straight from the definition: a partial bijection whose inverse and
    forward directions both respect the strict order."""
    pairs = list(pairs)
    dom = [a for a, _ in pairs]
    rng = [b for _, b in pairs]
    if len(set(dom)) != len(dom) or len(set(rng)) != len(rng):
        return False
    for (a, b), (a2, b2) in itertools.product(pairs, repeat=2):
        if P.less(a, a2) != P.less(b, b2):
            return False
    return True


def brute_posets(n):
    """Every strict order on range(n), labelled (not up to iso)."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            continue
        yield make_poset(range(n), rel)


@pytest.fixture(scope="session")
def base():
    return base_pair()


@pytest.fixture(scope="session")
def witness():
    return build_witness()
