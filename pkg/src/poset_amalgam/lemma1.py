"""Staged construction of an extension with a free interval at the end of an
increasing orbit.

Given a partial automorphism ``h`` and a point ``s < h(s)``, the builder walks
through the carrier ``a_1, ..., a_k`` and at each stage tries to push the
orbit of ``s`` above ``a_i`` (case 1), else make it incomparable to ``a_i``
(case 2), else leaves it alone (case 3).  Afterwards one fresh orbit point
``a`` and a copy ``b`` of it sitting just above are added.

Orbit search
------------
Fresh orbit points form a strictly increasing chain, so everything below an
earlier orbit point is below every later one and everything above a later
one is above the earlier ones.  Hence the only data that matters for
continuing the orbit is the type of its newest point over the current
carrier: a pair ``(below, above)``.  The next point's relations to range
elements are forced by pushing that type along the map; relations to the
remaining elements are free subject to monotonicity and transitivity.  The
search is a breadth-first walk over these finitely many states, so a miss
after the walk terminates is an exact refutation.

Orbit points in an arbitrary extension may also pass through old elements;
replacing them with fresh copies (same relations to everything else,
incomparable to the original) gives an extension with the same relations to
the old carrier, so fresh points are enough.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .errors import (BoundExhausted, HypothesisViolation, InternalInvariantBroken,
                     PreconditionViolation, UnknownElement)
from .generators import ABOVE, BELOW, NEITHER, cuts
from .partial_auto import (FreeVerdict, PartialAutomorphism, free_verify_bounded, orbit,
                           validate_pa)
from .poset import Embedding, Poset, QfType, is_extension, push_forward, qf_type


class Target(enum.Enum):
    ABOVE = "above"
    INCOMPARABLE = "incomparable"


def _state_key(state):
    D, U = state
    return (tuple(sorted(D)), tuple(sorted(U)))


def _successors(h: PartialAutomorphism, state):
    """States of the next orbit point given the type of the current one."""
    P = h.poset
    D_prev, U_prev = state
    fixed = {}
    for w in h.rng:
        v = h.inverse_get(w)
        want = BELOW if v in D_prev else ABOVE if v in U_prev else NEITHER
        fixed[w] = want
    for w in D_prev:
        if fixed.get(w, BELOW) != BELOW:
            return []
        fixed[w] = BELOW
    for w, want in fixed.items():
        if want == ABOVE and w not in U_prev:
            return []
    exclude = [w for w in P.elements if w not in U_prev]
    out = list(cuts(P, fixed=fixed, exclude_above=exclude))
    out.sort(key=_state_key)
    return out


def _initial_state(P: Poset, last):
    return (P.down(last) | {last}, P.up(last))


def _goal_at_start(P: Poset, last, a_i, target: Target) -> bool:
    if target is Target.ABOVE:
        return P.less(a_i, last)
    return P.incomparable(a_i, last)


def _goal(state, a_i, target: Target) -> bool:
    D, U = state
    if target is Target.ABOVE:
        return a_i in D
    return a_i not in D and a_i not in U


def _orbit_label(P: Poset, s, name: str, k: int) -> str:
    return f"{name}^{k}({P.label(s)})"


def realize_orbit(h: PartialAutomorphism, s, path, name: str = "f"):
    """Append fresh orbit points with the given sequence of states."""
    pts, _ = orbit(h, s)
    last = pts[-1]
    n = len(pts) - 1
    P = h.poset
    new = []
    pairs = set(h.map)
    prev = last
    for t, (D, U) in enumerate(path, start=1):
        P, p = P.add_point(set(D) | set(new) | {last}, U,
                           label=_orbit_label(P, s, name, n + t))
        pairs.add((prev, p))
        new.append(p)
        prev = p
    return validate_pa(P, pairs), new


def orbit_relation_search(Ai: PartialAutomorphism, s, a_i, target: Target,
                          m_max: Optional[int] = None, new_points_max: Optional[int] = None,
                          strict: bool = False, name: str = "f"):
    """Find an extension D of ``Ai`` and the least ``m >= n_i`` with
    ``f_D^m(s)`` related to ``a_i`` as ``target`` demands.

    Returns ``(D, m)`` or None.  With no bounds the walk runs until the state
    space is exhausted; with bounds, a cut-off walk returns None (or raises
    :class:`BoundExhausted` when ``strict``).
    """
    P = Ai.poset
    pts, cyclic = orbit(Ai, s)
    if cyclic:
        raise InternalInvariantBroken("orbit of s is periodic")
    n_i = len(pts) - 1
    last = pts[-1]
    if _goal_at_start(P, last, a_i, target):
        return Ai, n_i
    cap = new_points_max
    if m_max is not None:
        cap = m_max - n_i if cap is None else min(cap, m_max - n_i)

    start = _initial_state(P, last)
    # the start state describes an old point; a fresh point may share its key
    parent = {}
    frontier = [start]
    depth = 0
    while frontier:
        if cap is not None and depth >= cap:
            if strict:
                raise BoundExhausted(f"orbit search for {a_i} cut off at {cap} new points")
            return None
        depth += 1
        nxt = []
        hits = []
        for state in frontier:
            for succ in _successors(Ai, state):
                key = _state_key(succ)
                if key in parent:
                    continue
                parent[key] = state
                nxt.append(succ)
                if _goal(succ, a_i, target):
                    hits.append(succ)
        if hits:
            best = min(hits, key=_state_key)
            path = [best]
            while True:
                prev = parent[_state_key(path[-1])]
                if prev is start:
                    break
                path.append(prev)
            path.reverse()
            D, _ = realize_orbit(Ai, s, path, name)
            return D, n_i + len(path)
        nxt.sort(key=_state_key)
        frontier = nxt
    return None


@dataclass
class StageRecord:
    element: int
    case: int
    m: int
    new_points: list = field(default_factory=list)


@dataclass
class Lemma1Trace:
    s: int
    stages: list
    n_final: int
    a: int
    b: int
    B: PartialAutomorphism
    A: PartialAutomorphism
    n_stages: list = field(default_factory=list)
    free: Optional[FreeVerdict] = None

    @property
    def orbit(self) -> list:
        return orbit(self.B, self.s)[0]

    def to_json(self) -> dict:
        from .io import pa_to_json
        return {
            "s": self.s,
            "n": self.n_final,
            "a": self.a,
            "b": self.b,
            "stages": [{"element": st.element, "case": st.case, "m": st.m,
                        "new_points": st.new_points} for st in self.stages],
            "orbit": self.orbit,
            "input": pa_to_json(self.A),
            "result": pa_to_json(self.B),
            "free_check": None if self.free is None else {
                "passed": self.free.passed,
                "extensions": self.free.extensions_checked,
                "chains": self.free.chains_checked,
            },
        }


def lemma1_extend(A: PartialAutomorphism, s, m_max: Optional[int] = None,
                  new_points_max: Optional[int] = None, verify: bool = True,
                  k_points: int = 2, l_chain: int = 2, name: str = "f") -> Lemma1Trace:
    P = A.poset
    if s not in P:
        raise UnknownElement(s)
    fs = A.get(s)
    if fs is None or not P.less(s, fs):
        raise HypothesisViolation(f"need {s} < f({s}); f({s}) = {fs}")

    h = A
    stages = []
    n_hist = []
    for a_i in P.elements:
        n_i = len(orbit(h, s)[0]) - 1
        n_hist.append(n_i)
        before = set(h.poset.elements)
        case = 3
        m = n_i
        for c, target in ((1, Target.ABOVE), (2, Target.INCOMPARABLE)):
            found = orbit_relation_search(h, s, a_i, target, m_max=m_max,
                                          new_points_max=new_points_max, strict=True, name=name)
            if found is not None:
                h, m = found
                case = c
                break
        stages.append(StageRecord(a_i, case, m, sorted(set(h.poset.elements) - before)))

    pts, _ = orbit(h, s)
    n_k = len(pts) - 1
    last = pts[-1]
    succ = _successors(h, _initial_state(h.poset, last))
    if not succ:
        raise InternalInvariantBroken("no one-point orbit extension exists")
    E, (a,) = realize_orbit(h, s, [succ[0]], name)
    PB, b = E.poset.copy_above(a, label=f"b_{name}")
    labels = dict(PB.labels)
    labels[a] = f"a_{name}"
    PB = Poset(PB.elements, PB.lt, labels)
    B = validate_pa(PB, E.map)
    n = n_k + 1
    if B.power(s, n) != a or not PB.less(a, b):
        raise InternalInvariantBroken("final orbit point misplaced")
    trace = Lemma1Trace(s, stages, n, a, b, B, A, n_hist + [n_k])
    if verify:
        trace.free = free_verify_bounded(B, a, b, k_points, l_chain)
        if not trace.free:
            raise InternalInvariantBroken(f"freeness check failed: {trace.free.counterexample}")
    return trace


@dataclass
class ClaimReport:
    part1: bool
    part2: bool
    type_c: QfType
    type_a: QfType
    pushed: QfType
    range_type: QfType

    @property
    def ok(self) -> bool:
        return self.part1 and self.part2


def claim_check(B: PartialAutomorphism, a, b, C: Poset, c) -> ClaimReport:
    """Check the two type identities for a point ``c`` inserted between
    ``a`` and ``b``."""
    if c not in C:
        raise PreconditionViolation(f"{c} is not in C")
    if not is_extension(B.poset, C):
        raise PreconditionViolation("C does not extend B")
    if not (C.less(a, c) and C.less(c, b)):
        raise PreconditionViolation(f"need {a} < {c} < {b}")
    rest = B.poset.element_set - {a}
    t_c = qf_type(c, rest, C)
    t_a = qf_type(a, rest, C)
    alpha = Embedding(C.restrict(B.dom), C, dict(B.map))
    pushed = push_forward(qf_type(c, B.dom, C), alpha)
    rng_t = qf_type(c, B.rng, C)
    return ClaimReport(t_c == t_a, pushed == rng_t, t_c, t_a, pushed, rng_t)


def insert_midpoint(B: PartialAutomorphism, a, b, label: Optional[str] = None):
    """Add ``c`` with ``a < c < b`` typed like ``a`` over the rest."""
    P = B.poset
    below = P.down(a) | {a}
    above = (P.up(a) - {b}) | {b}
    C, c = P.add_point(below, above, label=label)
    return C, c
