"""One-point types, saturation towards the random poset, and seeded corpora."""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Optional

import numpy as np

from .errors import InconsistentType, SizeCap, TypeMismatch
from .partial_auto import PaPair, PartialAutomorphism, extend_by_pair
from .poset import DEFAULT_CAP, Poset, QfType, make_poset, qf_type

BELOW, ABOVE, NEITHER = "D", "U", "N"


def _topological(P: Poset) -> list:
    return sorted(P.elements, key=lambda a: (len(P.down(a)), a))


def cuts(P: Poset, must_below: Iterable = (), must_above: Iterable = (),
         fixed: Optional[Mapping] = None, exclude_above: Iterable = ()):
    """Yield every ``(below, above)`` pair describing a consistent new point.

    ``below`` is a down-set, ``above`` an up-set, and every element of
    ``below`` is already under every element of ``above``.  ``fixed`` pins
    individual elements to ``"D"``, ``"U"`` or ``"N"``.
    """
    fixed = dict(fixed or {})
    exclude_above = frozenset(exclude_above)
    for a in must_below:
        if fixed.get(a, BELOW) != BELOW:
            return
        fixed[a] = BELOW
    for a in must_above:
        if fixed.get(a, ABOVE) != ABOVE:
            return
        fixed[a] = ABOVE
    order = _topological(P)
    rev = order[::-1]

    def pick_above(i, D, U, candidates):
        if i == len(rev):
            yield frozenset(D), frozenset(U)
            return
        a = rev[i]
        want = fixed.get(a)
        ok = a in candidates and a not in exclude_above and P.up(a) <= U
        if ok and want in (None, ABOVE):
            U.add(a)
            yield from pick_above(i + 1, D, U, candidates)
            U.discard(a)
        if want == ABOVE:
            return
        if a in D:
            yield from pick_above(i + 1, D, U, candidates)
            return
        if want in (None, NEITHER):
            yield from pick_above(i + 1, D, U, candidates)

    def pick_below(i, D):
        if i == len(order):
            candidates = {u for u in P.elements if u not in D and all(P.less(d, u) for d in D)}
            yield from pick_above(0, D, set(), candidates)
            return
        a = order[i]
        want = fixed.get(a)
        if P.down(a) <= D and want in (None, BELOW):
            D.add(a)
            yield from pick_below(i + 1, D)
            D.discard(a)
        if want != BELOW:
            yield from pick_below(i + 1, D)

    yield from pick_below(0, set())


def realizes(P: Poset, S: Iterable, gt: Iterable, lt: Iterable):
    """Least realisation of the type (``gt`` below, ``lt`` above) over ``S``,
    as a ``(below, above)`` pair, or None when unrealisable."""
    S = frozenset(S)
    gt, lt = frozenset(gt), frozenset(lt)
    D = set(gt) | {d for a in gt for d in P.down(a)}
    U = set(lt) | {u for a in lt for u in P.up(a)}
    if D & S != gt or U & S != lt or D & U:
        return None
    if any(not P.less(d, u) for d in D for u in U):
        return None
    return frozenset(D), frozenset(U)


def one_point_types(A: Poset, S: Iterable) -> list:
    """All types over ``S`` (equality excluded) realised by a point in some
    one-point extension of ``A``."""
    S = sorted(frozenset(S))
    out = []
    for assignment in itertools.product((BELOW, ABOVE, NEITHER), repeat=len(S)):
        gt = frozenset(a for a, r in zip(S, assignment) if r == BELOW)
        lt = frozenset(a for a, r in zip(S, assignment) if r == ABOVE)
        if realizes(A, S, gt, lt) is not None:
            out.append(QfType(frozenset(S), gt, lt, frozenset()))
    return out


def saturate(A: Poset, k: int, cap: int = DEFAULT_CAP) -> Poset:
    """Extend ``A`` until every realisable type over every subset of the
    original carrier of size at most ``k`` has a witness."""
    if k < 1:
        raise ValueError("k must be at least 1")
    k = min(k, len(A))
    P = A
    for size in range(k + 1):
        for S in itertools.combinations(A.elements, size):
            for t in one_point_types(A, S):
                if any(c not in t.base and qf_type(c, S, P) == t for c in P.elements):
                    continue
                if len(P) + 1 > cap:
                    raise SizeCap(f"saturation would exceed {cap} elements")
                below, above = realizes(P, S, t.gt, t.lt)
                P, _ = P.add_point(below, above)
    return P


def saturation_problems(A: Poset, P: Poset, k: int) -> list:
    """Definitional post-check for :func:`saturate`; empty when satisfied."""
    bad = []
    for size in range(min(k, len(A)) + 1):
        for S in itertools.combinations(A.elements, size):
            for t in one_point_types(A, S):
                if not any(c not in t.base and qf_type(c, S, P) == t for c in P.elements):
                    bad.append(t)
    return bad


# ---------------------------------------------------------------------------
# small-poset enumeration


def canonical_form(P: Poset) -> tuple:
    idx = P.elements
    best = None
    for perm in itertools.permutations(range(len(idx))):
        ren = dict(zip(idx, perm))
        key = tuple(sorted((ren[a], ren[b]) for a, b in P.lt))
        if best is None or key < best:
            best = key
    return (len(idx), best)


def all_posets(n: int) -> list:
    """One representative of every isomorphism class of posets on
    ``{0, ..., n-1}``."""
    if n == 0:
        return [make_poset([])]
    out = {}
    for Q in all_posets(n - 1):
        for below, above in cuts(Q):
            P, _ = Q.add_point(below, above, new_id=n - 1)
            out.setdefault(canonical_form(P), P)
    return [out[key] for key in sorted(out)]


def partial_automorphisms(P: Poset) -> list:
    """Every partial automorphism of ``P`` (exhaustive)."""
    from .partial_auto import is_pa
    out = []
    els = P.elements
    for size in range(len(els) + 1):
        for dom in itertools.combinations(els, size):
            for rng in itertools.permutations(els, size):
                pairs = frozenset(zip(dom, rng))
                if is_pa(P, pairs):
                    out.append(PartialAutomorphism(P, pairs))
    return out


# ---------------------------------------------------------------------------
# seeded random corpora


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(int(seed) & (2**64 - 1)))


def random_poset(n: int, rng: np.random.Generator, density: float = 0.4) -> Poset:
    perm = [int(v) for v in rng.permutation(n)]
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)
             if rng.random() < density]
    return make_poset(range(n), pairs)


def _try_extend(h: PartialAutomorphism, rng, attempts: int = 12):
    P = h.poset
    cs = [a for a in P.elements if a not in h.dom]
    ds = [a for a in P.elements if a not in h.rng]
    if not cs or not ds:
        return h
    for _ in range(attempts):
        c = cs[int(rng.integers(len(cs)))]
        d = ds[int(rng.integers(len(ds)))]
        try:
            return extend_by_pair(h, c, d)
        except TypeMismatch:
            continue
    return h


def random_pa(P: Poset, rng: np.random.Generator, moves: int = 3) -> PartialAutomorphism:
    h = PartialAutomorphism(P, frozenset())
    for _ in range(moves):
        h = _try_extend(h, rng)
    return h


def random_pa_pair(n: int, rng: np.random.Generator, moves: int = 3) -> PaPair:
    P = random_poset(n, rng)
    return PaPair(P, random_pa(P, rng, moves), random_pa(P, rng, moves))


def _random_point(P: Poset, rng):
    for _ in range(20):
        r = rng.integers(3, size=len(P))
        gt = [a for a, v in zip(P.elements, r) if v == 0]
        lt = [a for a, v in zip(P.elements, r) if v == 1]
        try:
            return P.add_point(gt, lt)
        except InconsistentType:
            continue
    return P.add_point()


def random_pa_extension(P: PaPair, steps: int, seed: int, max_size: Optional[int] = None) -> PaPair:
    """Apply ``steps`` random legal moves to ``P``: add a point, or grow f or g
    by one pair.  Reproducible for a fixed seed."""
    rng = make_rng(seed)
    poset, f, g = P.poset, P.f, P.g
    for _ in range(steps):
        move = int(rng.integers(3))
        if move == 0:
            if max_size is not None and len(poset) >= max_size:
                continue
            poset, _ = _random_point(poset, rng)
            f = PartialAutomorphism(poset, f.map)
            g = PartialAutomorphism(poset, g.map)
        elif move == 1:
            f = _try_extend(f, rng)
        else:
            g = _try_extend(g, rng)
    return PaPair(poset, f, g)


def random_lemma_input(rng: np.random.Generator, max_size: int = 5):
    """A random partial automorphism with a point ``s`` satisfying s < f(s)."""
    while True:
        n = int(rng.integers(2, max_size + 1))
        P = random_poset(n, rng, density=0.5)
        if not P.lt:
            continue
        pairs = sorted(P.lt)
        c, d = pairs[int(rng.integers(len(pairs)))]
        h = PartialAutomorphism(P, frozenset({(c, d)}))
        for _ in range(int(rng.integers(0, 4))):
            h = _try_extend(h, rng)
        return h, c
