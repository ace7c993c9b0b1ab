"""Finite strict partial orders, embeddings and quantifier-free types.

Elements are small integer ids.  A :class:`Poset` stores the full
(transitively closed) strict order; :func:`make_poset` is the validating
constructor that accepts any generating relation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (CycleDetected, InconsistentType, NotEmbedding, NotIsomorphism, SizeCap,
                     UnknownElement)

DEFAULT_CAP = 128

# relation codes returned by Poset.relation
LESS, GREATER, EQUAL, INCOMPARABLE = "<", ">", "=", "|"


@dataclass(frozen=True)
class Poset:
    elements: tuple
    lt: frozenset
    labels: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(self.elements)))
        object.__setattr__(self, "lt", frozenset(self.lt))
        down = {a: set() for a in self.elements}
        up = {a: set() for a in self.elements}
        for a, b in self.lt:
            down[b].add(a)
            up[a].add(b)
        object.__setattr__(self, "_down", {a: frozenset(s) for a, s in down.items()})
        object.__setattr__(self, "_up", {a: frozenset(s) for a, s in up.items()})
        object.__setattr__(self, "_set", frozenset(self.elements))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, a):
        return a in self._set

    def __hash__(self):
        return hash((self.elements, self.lt))

    @property
    def element_set(self) -> frozenset:
        return self._set

    def less(self, a, b) -> bool:
        return (a, b) in self.lt

    def incomparable(self, a, b) -> bool:
        return a != b and (a, b) not in self.lt and (b, a) not in self.lt

    def relation(self, a, b) -> str:
        if a == b:
            return EQUAL
        if (a, b) in self.lt:
            return LESS
        if (b, a) in self.lt:
            return GREATER
        return INCOMPARABLE

    def down(self, a) -> frozenset:
        """Elements strictly below ``a``."""
        return self._down[a]

    def up(self, a) -> frozenset:
        return self._up[a]

    def label(self, a) -> str:
        return self.labels.get(a, str(a))

    def fresh_id(self) -> int:
        return max(self.elements, default=-1) + 1

    def check(self) -> None:
        """Assert every structural invariant (used by tests)."""
        for a, b in self.lt:
            assert a in self._set and b in self._set, (a, b)
            assert a != b, (a, b)
            assert (b, a) not in self.lt, (a, b)
            for c in self._up[b]:
                assert (a, c) in self.lt, (a, b, c)

    def restrict(self, subset: Iterable) -> "Poset":
        s = frozenset(subset)
        missing = s - self._set
        if missing:
            raise UnknownElement(sorted(missing))
        return Poset(tuple(s), frozenset((a, b) for a, b in self.lt if a in s and b in s),
                     {k: v for k, v in self.labels.items() if k in s})

    def add_point(self, below: Iterable = (), above: Iterable = (), new_id=None, label=None):
        """Add a fresh point sitting above ``below`` and under ``above``.

        Both sets are closed (down- and upward respectively); the result is
        the least extension realising these relations.  Returns
        ``(poset, new_id)``.
        """
        if new_id is None:
            new_id = self.fresh_id()
        if new_id in self._set:
            raise ValueError(f"id {new_id} already present")
        D = set(below)
        U = set(above)
        for a in D | U:
            if a not in self._set:
                raise UnknownElement(a)
        D |= {d for a in list(D) for d in self._down[a]}
        U |= {u for a in list(U) for u in self._up[a]}
        if D & U:
            raise InconsistentType(f"point would lie both above and below {sorted(D & U)}")
        for d in D:
            for u in U:
                if (d, u) not in self.lt:
                    raise InconsistentType(f"point between {d} and {u} forces {d} < {u}")
        new_lt = set(self.lt)
        new_lt |= {(d, new_id) for d in D}
        new_lt |= {(new_id, u) for u in U}
        labels = dict(self.labels)
        if label is not None:
            labels[new_id] = label
        return Poset(self.elements + (new_id,), frozenset(new_lt), labels), new_id

    def copy_above(self, a, new_id=None, label=None):
        """Add a point ``b`` with ``a < b`` that is otherwise related to every
        other element exactly as ``a`` is."""
        P, b = self.add_point(self._down[a] | {a}, self._up[a], new_id=new_id, label=label)
        assert all(P.relation(b, w) == P.relation(a, w) for w in self.elements if w != a)
        return P, b

    def hasse(self) -> list:
        """Cover pairs of the order (its transitive reduction)."""
        covers = []
        for a, b in sorted(self.lt):
            if not any((a, c) in self.lt and (c, b) in self.lt for c in self.elements):
                covers.append((a, b))
        return covers

    def relabel(self, mapping: Mapping) -> "Poset":
        return Poset(tuple(mapping[a] for a in self.elements),
                     frozenset((mapping[a], mapping[b]) for a, b in self.lt),
                     {mapping[k]: v for k, v in self.labels.items()})


def transitive_closure(elements, pairs) -> frozenset:
    succ = {a: set() for a in elements}
    for a, b in pairs:
        succ[a].add(b)
    closed = set()
    for a in elements:
        seen = set()
        stack = list(succ[a])
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(succ[v])
        closed |= {(a, v) for v in seen}
    return frozenset(closed)


def make_poset(elements: Iterable, relation_pairs: Iterable = (), labels=None,
               cap: int = DEFAULT_CAP) -> Poset:
    elements = list(dict.fromkeys(elements))
    if len(elements) > cap:
        raise SizeCap(f"{len(elements)} elements exceeds cap {cap}")
    eset = set(elements)
    pairs = [tuple(p) for p in relation_pairs]
    for a, b in pairs:
        for v in (a, b):
            if v not in eset:
                raise UnknownElement(v)
    lt = transitive_closure(elements, pairs)
    loops = sorted(a for a, b in lt if a == b)
    if loops:
        raise CycleDetected(f"relation has a cycle through {loops}")
    return Poset(tuple(elements), lt, dict(labels or {}))


def chain(n: int) -> Poset:
    return make_poset(range(n), [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> Poset:
    return make_poset(range(n))


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class Embedding:
    source: Poset
    target: Poset
    map: Mapping

    def __post_init__(self):
        object.__setattr__(self, "map", dict(self.map))
        problem = embedding_problem(self.source, self.target, self.map)
        if problem:
            raise NotEmbedding(problem)

    def __call__(self, a):
        return self.map[a]

    def compose(self, other: "Embedding") -> "Embedding":
        """``other`` after ``self``."""
        return Embedding(self.source, other.target, {a: other.map[b] for a, b in self.map.items()})


def embedding_problem(A: Poset, B: Poset, m: Mapping):
    """Return a description of why ``m`` is not an embedding, or None."""
    if set(m) != A.element_set:
        return "map is not total on the source"
    if len(set(m.values())) != len(m):
        return "map is not injective"
    for v in m.values():
        if v not in B:
            return f"image {v} not in target"
    for a in A.elements:
        for a2 in A.elements:
            if a != a2 and A.less(a, a2) != B.less(m[a], m[a2]):
                return f"order not preserved/reflected on ({a}, {a2})"
    return None


def is_embedding(A: Poset, B: Poset, m: Mapping) -> bool:
    return embedding_problem(A, B, m) is None


def find_embeddings(A: Poset, B: Poset, limit=None) -> list:
    """All embeddings of ``A`` into ``B`` (at most ``limit`` of them).

    Backtracking over the elements of ``A`` sorted by decreasing
    comparability degree; every partial assignment is kept consistent with
    the order on the already placed points.
    """
    order = sorted(A.elements, key=lambda a: (-(len(A.down(a)) + len(A.up(a))), a))
    out = []
    assigned = {}
    used = set()

    def rec(i):
        if limit is not None and len(out) >= limit:
            return
        if i == len(order):
            out.append(Embedding(A, B, dict(assigned)))
            return
        a = order[i]
        for b in B.elements:
            if b in used:
                continue
            if any(A.relation(a, a2) != B.relation(b, b2) for a2, b2 in assigned.items()):
                continue
            assigned[a] = b
            used.add(b)
            rec(i + 1)
            del assigned[a]
            used.discard(b)

    rec(0)
    return out


def is_extension(A: Poset, B: Poset) -> bool:
    if not A.element_set <= B.element_set:
        return False
    return A.lt == frozenset((a, b) for a, b in B.lt if a in A and b in A)


# ---------------------------------------------------------------------------
# quantifier-free types


@dataclass(frozen=True)
class QfType:
    """Which base points lie below (``gt``: x > a), above (``lt``: x < a) or
    equal to the typed point."""
    base: frozenset
    gt: frozenset
    lt: frozenset
    eq: frozenset

    def __post_init__(self):
        for name in ("base", "gt", "lt", "eq"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        assert not (self.gt & self.lt or self.gt & self.eq or self.lt & self.eq)
        assert len(self.eq) <= 1
        assert self.gt | self.lt | self.eq <= self.base

    def __repr__(self):
        return f"QfType(gt={sorted(self.gt)}, lt={sorted(self.lt)}, eq={sorted(self.eq)})"


def qf_type(c, S: Iterable, P: Poset) -> QfType:
    if c not in P:
        raise UnknownElement(c)
    S = frozenset(S)
    missing = S - P.element_set
    if missing:
        raise UnknownElement(sorted(missing))
    return QfType(S,
                  frozenset(a for a in S if P.less(a, c)),
                  frozenset(a for a in S if P.less(c, a)),
                  frozenset(a for a in S if a == c))


def push_forward(p: QfType, alpha: Embedding) -> QfType:
    """Transport ``p`` along ``alpha`` (which must be defined on ``p.base``)."""
    if not p.base <= set(alpha.map):
        raise NotIsomorphism(f"base points {sorted(p.base - set(alpha.map))} not in domain")
    m = alpha.map
    return QfType(frozenset(m[a] for a in p.base),
                  frozenset(m[a] for a in p.gt),
                  frozenset(m[a] for a in p.lt),
                  frozenset(m[a] for a in p.eq))
