"""Partial automorphisms, pairs of them, and freeness checks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import (DomainConflict, NotEmbedding, NotInjective, OrderViolation,
                     PreconditionViolation, TypeMismatch, UnknownElement)
from .poset import Embedding, Poset, embedding_problem, is_extension, push_forward, qf_type


def _pairs(m) -> frozenset:
    if isinstance(m, Mapping):
        m = m.items()
    return frozenset(tuple(p) for p in m)


def pa_problem(P: Poset, pairs: Iterable):
    """None if ``pairs`` is the graph of a partial automorphism of ``P``,
    otherwise the exception that describes the first violation."""
    pairs = sorted(_pairs(pairs))
    for a, b in pairs:
        for v in (a, b):
            if v not in P:
                return UnknownElement(v)
    firsts = [a for a, _ in pairs]
    seconds = [b for _, b in pairs]
    if len(set(firsts)) != len(firsts):
        return NotInjective("map is not a function")
    if len(set(seconds)) != len(seconds):
        return NotInjective("map is not injective")
    for (a, b), (a2, b2) in itertools.combinations(pairs, 2):
        if P.relation(a, a2) != P.relation(b, b2):
            return OrderViolation((a, a2), (b, b2))
    return None


@dataclass(frozen=True)
class PartialAutomorphism:
    poset: Poset
    map: frozenset

    def __post_init__(self):
        object.__setattr__(self, "map", _pairs(self.map))
        object.__setattr__(self, "_fwd", dict(self.map))
        object.__setattr__(self, "_bwd", {b: a for a, b in self.map})

    def __call__(self, a):
        return self._fwd[a]

    def get(self, a, default=None):
        return self._fwd.get(a, default)

    def inverse_get(self, b, default=None):
        return self._bwd.get(b, default)

    @property
    def dom(self) -> frozenset:
        return frozenset(self._fwd)

    @property
    def rng(self) -> frozenset:
        return frozenset(self._bwd)

    def as_embedding(self) -> Embedding:
        """The map as an isomorphism from the poset induced on dom onto P."""
        return Embedding(self.poset.restrict(self.dom), self.poset, self._fwd)

    def power(self, a, n: int):
        for _ in range(n):
            a = self._fwd.get(a)
            if a is None:
                return None
        return a

    def with_poset(self, P: Poset) -> "PartialAutomorphism":
        return validate_pa(P, self.map)


def validate_pa(P: Poset, pairs) -> PartialAutomorphism:
    err = pa_problem(P, pairs)
    if err is not None:
        raise err
    return PartialAutomorphism(P, _pairs(pairs))


def is_pa(P: Poset, pairs) -> bool:
    return pa_problem(P, pairs) is None


@dataclass(frozen=True)
class PaPair:
    poset: Poset
    f: PartialAutomorphism
    g: PartialAutomorphism

    def __post_init__(self):
        if self.f.poset != self.poset or self.g.poset != self.poset:
            raise ValueError("both partial automorphisms must live on the pair's poset")

    @classmethod
    def make(cls, P: Poset, f=(), g=()) -> "PaPair":
        return cls(P, validate_pa(P, f), validate_pa(P, g))

    def maps(self):
        return {"f": self.f, "g": self.g}

    def __len__(self):
        return len(self.poset)


def pa_embedding_problem(A: PaPair, B: PaPair, m: Mapping):
    problem = embedding_problem(A.poset, B.poset, m)
    if problem:
        return problem
    for name in ("f", "g"):
        hA, hB = getattr(A, name), getattr(B, name)
        for a, a2 in hA.map:
            if hB.get(m[a]) != m[a2]:
                return f"{name} does not commute at {a}"
    return None


@dataclass(frozen=True)
class PaEmbedding:
    source: PaPair
    target: PaPair
    map: Mapping

    def __post_init__(self):
        object.__setattr__(self, "map", dict(self.map))
        problem = pa_embedding_problem(self.source, self.target, self.map)
        if problem:
            raise NotEmbedding(problem)

    def __call__(self, a):
        return self.map[a]

    def compose(self, other: "PaEmbedding") -> "PaEmbedding":
        """``other`` after ``self``."""
        return PaEmbedding(self.source, other.target,
                           {a: other.map[b] for a, b in self.map.items()})

    @classmethod
    def inclusion(cls, small: PaPair, big: PaPair) -> "PaEmbedding":
        return cls(small, big, {a: a for a in small.poset.elements})


def is_pa_embedding(A: PaPair, B: PaPair, m: Mapping) -> bool:
    return pa_embedding_problem(A, B, m) is None


def is_pa_extension(small: PaPair, big: PaPair) -> bool:
    if not is_extension(small.poset, big.poset):
        return False
    return small.f.map <= big.f.map and small.g.map <= big.g.map


def extend_by_pair(h: PartialAutomorphism, c, d) -> PartialAutomorphism:
    """Add ``(c, d)`` to ``h`` after comparing types over dom and rng."""
    P = h.poset
    for v in (c, d):
        if v not in P:
            raise UnknownElement(v)
    if c in h.dom:
        raise DomainConflict(f"{c} already in the domain")
    if d in h.rng:
        raise DomainConflict(f"{d} already in the range")
    pushed = push_forward(qf_type(c, h.dom, P), h.as_embedding())
    target = qf_type(d, h.rng, P)
    if pushed != target:
        raise TypeMismatch(pushed, target)
    return PartialAutomorphism(P, h.map | {(c, d)})


def orbit(h: PartialAutomorphism, s):
    """Return ``(points, cyclic)``: the forward orbit of ``s`` until it leaves
    the domain or revisits a point."""
    points = [s]
    seen = {s}
    while True:
        nxt = h.get(points[-1])
        if nxt is None:
            return points, False
        if nxt in seen:
            return points, True
        points.append(nxt)
        seen.add(nxt)


def chain_map(h: PartialAutomorphism, a, chain_pts) -> frozenset:
    seq = [a, *chain_pts]
    return h.map | {(seq[i], seq[i + 1]) for i in range(len(seq) - 1)}


def free_check_instance(B: PartialAutomorphism, a, b, C: Poset, chain_pts) -> bool:
    if not is_extension(B.poset, C):
        raise PreconditionViolation("C does not extend B's poset")
    seq = [a, *chain_pts, b]
    for u, v in zip(seq, seq[1:]):
        if not C.less(u, v):
            raise PreconditionViolation(f"chain inequality {u} < {v} fails")
    return is_pa(C, chain_map(B, a, chain_pts))


@dataclass
class FreeVerdict:
    passed: bool
    extensions_checked: int = 0
    chains_checked: int = 0
    counterexample: Optional[tuple] = None  # (C, chain)

    def __bool__(self):
        return self.passed


def _interval_types(P: Poset, a, b):
    """(below, above) pairs realisable by a new point strictly between a and b."""
    from .generators import cuts
    yield from cuts(P, must_below={a}, must_above={b})


def _canon_over_base(P: Poset, base: frozenset, new: list):
    best = None
    for perm in itertools.permutations(range(len(new))):
        ren = {v: ("n", perm[i]) for i, v in enumerate(new)}
        key = tuple(sorted((str(ren.get(x, x)), str(ren.get(y, y))) for x, y in P.lt
                           if x in ren or y in ren))
        if best is None or key < best:
            best = key
    return best


def free_verify_bounded(B: PartialAutomorphism, a, b, k_points: int = 2,
                        l_chain: int = 2) -> FreeVerdict:
    """Bounded check of freeness of ``B`` in ``(a, b)``.

    Enumerates every extension of the poset by at most ``k_points`` new points
    (up to isomorphism over ``B``) and every chain of length at most
    ``l_chain`` strictly inside ``(a, b)``.  New points are only placed inside
    the interval: a point that is not on the tested chain is outside the
    domain and range of the enlarged map, so removing it never changes the
    verdict.
    """
    P = B.poset
    if not P.less(a, b):
        raise PreconditionViolation(f"{a} < {b} fails")
    verdict = FreeVerdict(True)
    seen = set()
    frontier = [(P, [])]
    for depth in range(k_points + 1):
        nxt = []
        for C, new in frontier:
            verdict.extensions_checked += 1
            inside = [w for w in C.elements if C.less(a, w) and C.less(w, b)]
            for ell in range(1, l_chain + 1):
                for pts in itertools.permutations(inside, ell):
                    if any(not C.less(u, v) for u, v in zip(pts, pts[1:])):
                        continue
                    verdict.chains_checked += 1
                    if not is_pa(C, chain_map(B, a, pts)):
                        return FreeVerdict(False, verdict.extensions_checked,
                                           verdict.chains_checked, (C, list(pts)))
            if depth == k_points:
                continue
            for below, above in _interval_types(C, a, b):
                C2, v = C.add_point(below, above)
                key = _canon_over_base(C2, P.element_set, new + [v])
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((C2, new + [v]))
        frontier = nxt
    return verdict
