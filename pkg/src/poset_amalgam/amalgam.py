"""Joint embedding and a complete amalgamation search for pairs of partial
automorphisms.

Any amalgam, cut down to the union of the two images, is again an amalgam.
So it is enough to search over quotients of the disjoint union of ``B`` and
``C`` glued along ``A``: choose which points of ``B`` and ``C`` outside the
images of ``A`` get identified, then choose the order between the remaining
cross pairs.  Identifications are closed under f and g (forward and
backward) before any branching; that propagation alone refutes most
non-amalgamable instances.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from .errors import ResourceLimit
from .partial_auto import PaEmbedding, PaPair, is_pa_embedding, pa_problem
from .poset import LESS, GREATER, INCOMPARABLE, Poset, make_poset

DEFAULT_MAX_NODES = 10**7
ENV_MAX_NODES = "POSET_AMALGAM_MAX_NODES"


def default_max_nodes() -> int:
    return int(os.environ.get(ENV_MAX_NODES, DEFAULT_MAX_NODES))


def jep_join(P1: PaPair, P2: PaPair):
    """Disjoint union with every point of ``P1`` below every point of ``P2``.

    Returns ``(C, emb1, emb2)``.
    """
    ren1 = {a: i for i, a in enumerate(P1.poset.elements)}
    off = len(ren1)
    ren2 = {a: off + i for i, a in enumerate(P2.poset.elements)}
    lt = {(ren1[a], ren1[b]) for a, b in P1.poset.lt}
    lt |= {(ren2[a], ren2[b]) for a, b in P2.poset.lt}
    lt |= {(u, v) for u in ren1.values() for v in ren2.values()}
    labels = {ren1[a]: P1.poset.label(a) for a in P1.poset.labels}
    labels.update({ren2[a]: P2.poset.label(a) for a in P2.poset.labels})
    P = Poset(tuple(ren1.values()) + tuple(ren2.values()), frozenset(lt), labels)
    f = {(ren1[a], ren1[b]) for a, b in P1.f.map} | {(ren2[a], ren2[b]) for a, b in P2.f.map}
    g = {(ren1[a], ren1[b]) for a, b in P1.g.map} | {(ren2[a], ren2[b]) for a, b in P2.g.map}
    C = PaPair.make(P, f, g)
    return C, PaEmbedding(P1, C, ren1), PaEmbedding(P2, C, ren2)


@dataclass
class Amalgam:
    D: PaPair
    emb_left: PaEmbedding
    emb_right: PaEmbedding


def verify_amalgam(D: PaPair, embB2: PaEmbedding, embC2: PaEmbedding,
                   embB: PaEmbedding, embC: PaEmbedding) -> bool:
    """Both legs are embeddings into ``D`` and the square commutes on A."""
    if embB2.target.poset != D.poset or embC2.target.poset != D.poset:
        return False
    if not (is_pa_embedding(embB2.source, D, embB2.map)
            and is_pa_embedding(embC2.source, D, embC2.map)):
        return False
    if not (is_pa_embedding(embB.source, embB.target, embB.map)
            and is_pa_embedding(embC.source, embC.target, embC.map)):
        return False
    return all(embB2.map[embB.map[a]] == embC2.map[embC.map[a]] for a in embB.map)


class _Search:
    def __init__(self, A, B, C, embB, embC, max_nodes):
        self.A, self.B, self.C = A, B, C
        self.embB, self.embC = embB, embC
        self.max_nodes = max_nodes
        self.nodes = 0
        self.imgB = frozenset(embB.map.values())
        self.imgC = frozenset(embC.map.values())
        self.Bfree = [b for b in B.poset.elements if b not in self.imgB]
        self.Cfree = [c for c in C.poset.elements if c not in self.imgC]

    def tick(self):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceLimit(self.max_nodes)

    # -- identification -----------------------------------------------------

    def propagate(self, match, rmatch, queue, closed):
        """Close ``match`` (B -> C) under f, g and their inverses.  Returns
        False on a conflict."""
        Bp, Cp = self.B, self.C
        while queue:
            b, c = queue.pop()
            if match.get(b) == c:
                continue
            if b in match or c in rmatch or b in closed:
                return False
            for b2, c2 in match.items():
                if Bp.poset.relation(b, b2) != Cp.poset.relation(c, c2):
                    return False
            match[b] = c
            rmatch[c] = b
            for name in ("f", "g"):
                hB, hC = getattr(Bp, name), getattr(Cp, name)
                fb, fc = hB.get(b), hC.get(c)
                if fb is not None and fc is not None:
                    queue.append((fb, fc))
                ib, ic = hB.inverse_get(b), hC.inverse_get(c)
                if ib is not None and ic is not None:
                    queue.append((ib, ic))
        return True

    def run(self) -> Optional[Amalgam]:
        match, rmatch = {}, {}
        queue = [(self.embB.map[a], self.embC.map[a]) for a in self.A.poset.elements]
        if not self.propagate(match, rmatch, queue, set()):
            return None
        return self.branch_match(0, match, rmatch, set())

    def branch_match(self, i, match, rmatch, closed):
        self.tick()
        while i < len(self.Bfree) and self.Bfree[i] in match:
            i += 1
        if i == len(self.Bfree):
            return self.solve_order(match)
        b = self.Bfree[i]
        for c in self.Cfree:
            if c in rmatch:
                continue
            m2, r2 = dict(match), dict(rmatch)
            if self.propagate(m2, r2, [(b, c)], closed):
                found = self.branch_match(i + 1, m2, r2, closed)
                if found is not None:
                    return found
        # b stays unidentified
        return self.branch_match(i + 1, match, rmatch, closed | {b})

    # -- order on the quotient ----------------------------------------------

    def solve_order(self, match):
        Bp, Cp = self.B.poset, self.C.poset
        rmatch = {c: b for b, c in match.items()}
        cnodes = [c for c in Cp.elements if c not in rmatch]
        # carrier: B's points, then C's unmatched points
        ids = {("B", b): i for i, b in enumerate(Bp.elements)}
        for c in cnodes:
            ids[("C", c)] = len(ids)
        n = len(ids)

        def node_of_c(c):
            return ids[("B", rmatch[c])] if c in rmatch else ids[("C", c)]

        side = [None] * n  # "B", "C" or "both"
        for b in Bp.elements:
            side[ids[("B", b)]] = "both" if b in match else "B"
        for c in cnodes:
            side[ids[("C", c)]] = "C"
        base_lt = {(ids[("B", a)], ids[("B", b)]) for a, b in Bp.lt}
        base_lt |= {(node_of_c(a), node_of_c(b)) for a, b in Cp.lt}
        # relation each side demands between two carrier nodes (None = unknown)
        known = {}
        for a in Bp.elements:
            for b in Bp.elements:
                if a != b:
                    known[(ids[("B", a)], ids[("B", b)])] = Bp.relation(a, b)
        for a in Cp.elements:
            for b in Cp.elements:
                if a != b:
                    u, v = node_of_c(a), node_of_c(b)
                    prev = known.get((u, v))
                    r = Cp.relation(a, b)
                    if prev is not None and prev != r:
                        return None
                    known[(u, v)] = r
        cross = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in known]
        fmap, gmap = {}, {}
        for name, store in (("f", fmap), ("g", gmap)):
            for a, b in getattr(self.B, name).map:
                store[ids[("B", a)]] = ids[("B", b)]
            for a, b in getattr(self.C, name).map:
                u, v = node_of_c(a), node_of_c(b)
                if store.get(u, v) != v:
                    return None
                store[u] = v
        maps = [sorted(fmap.items()), sorted(gmap.items())]
        for m in maps:
            if len({v for _, v in m}) != len(m):
                return None
        weight = {}
        for m in maps:
            for u, v in m:
                weight[u] = weight.get(u, 0) + 1
                weight[v] = weight.get(v, 0) + 1
        cross.sort(key=lambda p: (-(weight.get(p[0], 0) + weight.get(p[1], 0)), p))

        reach = [set() for _ in range(n)]
        for u, v in base_lt:
            reach[u].add(v)
        closure = _close(n, reach)
        if closure is None or not self._consistent(closure, known, {}, maps):
            return None

        assigned = {}

        def rec(k, closure):
            self.tick()
            if k == len(cross):
                return closure
            u, v = cross[k]
            forced = _rel(closure, u, v)
            options = [forced] if forced != INCOMPARABLE else [LESS, GREATER, INCOMPARABLE]
            for r in options:
                if r == LESS and forced == INCOMPARABLE:
                    new = _add_edge(closure, u, v)
                elif r == GREATER and forced == INCOMPARABLE:
                    new = _add_edge(closure, v, u)
                else:
                    new = closure
                if new is None:
                    continue
                assigned[(u, v)] = r
                if self._consistent(new, known, assigned, maps):
                    res = rec(k + 1, new)
                    if res is not None:
                        return res
                del assigned[(u, v)]
            return None

        final = rec(0, closure)
        if final is None:
            return None
        return self._build(ids, node_of_c, final, fmap, gmap)

    def _consistent(self, closure, known, assigned, maps) -> bool:
        n = len(closure)
        for u in range(n):
            if u in closure[u]:
                return False
        for (u, v), r in known.items():
            if _rel(closure, u, v) != r:
                return False
        for (u, v), r in assigned.items():
            if r == INCOMPARABLE and _rel(closure, u, v) != INCOMPARABLE:
                return False

        def determined(u, v):
            if u == v:
                return "="
            r = _rel(closure, u, v)
            if r != INCOMPARABLE:
                return r
            key = (u, v) if u < v else (v, u)
            if key in known or key in assigned:
                return INCOMPARABLE
            return None

        for m in maps:
            for i in range(len(m)):
                for j in range(i + 1, len(m)):
                    (a, b), (a2, b2) = m[i], m[j]
                    r1, r2 = determined(a, a2), determined(b, b2)
                    if r1 is not None and r2 is not None and r1 != r2:
                        return False
        return True

    def _build(self, ids, node_of_c, closure, fmap, gmap):
        n = len(closure)
        lt = {(u, v) for u in range(n) for v in closure[u]}
        labels = {}
        for (tag, x), i in ids.items():
            src = self.B.poset if tag == "B" else self.C.poset
            labels[i] = src.label(x) if tag == "B" else f"{src.label(x)}'"
        P = Poset(tuple(range(n)), frozenset(lt), labels)
        D = PaPair.make(P, fmap.items(), gmap.items())
        embL = PaEmbedding(self.B, D, {b: ids[("B", b)] for b in self.B.poset.elements})
        embR = PaEmbedding(self.C, D, {c: node_of_c(c) for c in self.C.poset.elements})
        return Amalgam(D, embL, embR)


def _rel(closure, u, v):
    if v in closure[u]:
        return LESS
    if u in closure[v]:
        return GREATER
    return INCOMPARABLE


def _close(n, reach):
    closure = [set(r) for r in reach]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            extra = set()
            for v in closure[u]:
                extra |= closure[v]
            if not extra <= closure[u]:
                closure[u] |= extra
                changed = True
    if any(u in closure[u] for u in range(n)):
        return None
    return closure


def _add_edge(closure, u, v):
    if u in closure[v] or u == v:
        return None
    new = [set(s) for s in closure]
    below = {w for w in range(len(new)) if u in new[w]} | {u}
    above = new[v] | {v}
    for w in below:
        new[w] |= above
    return new


def amalgam_exists(A: PaPair, B: PaPair, C: PaPair, embB: PaEmbedding, embC: PaEmbedding,
                   max_nodes: Optional[int] = None) -> Optional[Amalgam]:
    """Decide whether ``B`` and ``C`` amalgamate over ``A``.

    Returns a verified :class:`Amalgam`, or None when no amalgam exists.
    Raises :class:`ResourceLimit` when the node budget runs out.
    """
    if max_nodes is None:
        max_nodes = default_max_nodes()
    search = _Search(A, B, C, embB, embC, max_nodes)
    result = search.run()
    if result is not None and not verify_amalgam(result.D, result.emb_left, result.emb_right,
                                                 embB, embC):
        raise AssertionError("search produced an invalid amalgam")
    return result


def amalgam_exists_naive(A: PaPair, B: PaPair, C: PaPair, embB: PaEmbedding,
                         embC: PaEmbedding) -> Optional[Amalgam]:
    """Reference decision procedure: try every identification and every
    order on the cross pairs, checking each candidate with
    :func:`verify_amalgam`.  Exponential; for small cross-checks only."""
    import itertools

    imgB, imgC = set(embB.map.values()), set(embC.map.values())
    Bfree = [b for b in B.poset.elements if b not in imgB]
    Cfree = [c for c in C.poset.elements if c not in imgC]
    cinv = {embC.map[a]: embB.map[a] for a in embB.map}
    for k in range(min(len(Bfree), len(Cfree)) + 1):
        for cs in itertools.combinations(Cfree, k):
            for bs in itertools.permutations(Bfree, k):
                ident = dict(cinv)
                ident.update(zip(cs, bs))
                node = {("B", b): ("B", b) for b in B.poset.elements}
                for c in C.poset.elements:
                    node[("C", c)] = ("B", ident[c]) if c in ident else ("C", c)
                carrier = sorted(set(node.values()))
                idx = {v: i for i, v in enumerate(carrier)}
                base = [(idx[node[("B", a)]], idx[node[("B", b)]]) for a, b in B.poset.lt]
                base += [(idx[node[("C", a)]], idx[node[("C", b)]]) for a, b in C.poset.lt]
                bl = [idx[("B", b)] for b in Bfree if b not in bs]
                cl = [idx[("C", c)] for c in Cfree if c not in cs]
                cross = [(u, v) for u in bl for v in cl]
                fm, gm = set(), set()
                for name, store in (("f", fm), ("g", gm)):
                    for a, b in getattr(B, name).map:
                        store.add((idx[node[("B", a)]], idx[node[("B", b)]]))
                    for a, b in getattr(C, name).map:
                        store.add((idx[node[("C", a)]], idx[node[("C", b)]]))
                for choice in itertools.product((0, 1, 2), repeat=len(cross)):
                    rel = list(base)
                    for (u, v), r in zip(cross, choice):
                        if r == 0:
                            rel.append((u, v))
                        elif r == 1:
                            rel.append((v, u))
                    try:
                        P = make_poset(range(len(carrier)), rel)
                    except ValueError:
                        continue
                    if pa_problem(P, fm) is not None or pa_problem(P, gm) is not None:
                        continue
                    D = PaPair.make(P, fm, gm)
                    mB = {b: idx[node[("B", b)]] for b in B.poset.elements}
                    mC = {c: idx[node[("C", c)]] for c in C.poset.elements}
                    if not (is_pa_embedding(B, D, mB) and is_pa_embedding(C, D, mC)):
                        continue
                    L, R = PaEmbedding(B, D, mB), PaEmbedding(C, D, mC)
                    if verify_amalgam(D, L, R, embB, embC):
                        return Amalgam(D, L, R)
    return None
