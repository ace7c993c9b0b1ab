"""The explicit pair of extensions that cannot be amalgamated over the base
pair ``x < y < z``, ``f = {x->y, z->z}``, ``g = {x->z}``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import CertificateInvalid, InternalInvariantBroken, PreconditionViolation
from .lemma1 import Lemma1Trace, _initial_state, _successors, insert_midpoint, lemma1_extend, realize_orbit
from .partial_auto import (PaEmbedding, PaPair, PartialAutomorphism, is_pa_extension,
                           pa_problem, validate_pa)
from .poset import make_poset, qf_type

X, Y, Z = 0, 1, 2


def base_pair() -> PaPair:
    P = make_poset([X, Y, Z], [(X, Y), (Y, Z)], {X: "x", Y: "y", Z: "z"})
    return PaPair.make(P, [(X, Y), (Z, Z)], [(X, Z)])


@dataclass
class WitnessMeta:
    a_f: int
    b_f: int
    c: int
    n: int
    a_g: int
    b_g: int
    m: int
    cs: list
    ds: list
    e: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    f_trace: Optional[Lemma1Trace] = field(default=None, repr=False)
    g_trace: Optional[Lemma1Trace] = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {"a_f": self.a_f, "b_f": self.b_f, "c": self.c, "n": self.n,
                "a_g": self.a_g, "b_g": self.b_g, "m": self.m,
                "c_i": list(self.cs), "d_i": list(self.ds), "e": self.e,
                "p": self.p, "q": self.q}

    @classmethod
    def from_json(cls, d: dict) -> "WitnessMeta":
        return cls(d["a_f"], d["b_f"], d["c"], d["n"], d["a_g"], d["b_g"], d["m"],
                   list(d["c_i"]), list(d["d_i"]), d.get("e"), d.get("p"), d.get("q"))


def _check(cond, what):
    if not cond:
        raise InternalInvariantBroken(what)


def build_A0(Atilde: PaPair, verify: bool = True):
    """Common extension of ``Atilde`` shared by both non-amalgamable pairs.

    Returns ``(A0, meta)``.
    """
    if not is_pa_extension(base_pair(), Atilde):
        raise PreconditionViolation("input does not extend the base pair")

    # f side: free interval (a_f, b_f) at the end of x's orbit, then c inside it
    ft = lemma1_extend(Atilde.f, X, verify=verify, name="f")
    a_f, b_f, n = ft.a, ft.b, ft.n_final
    P, c = insert_midpoint(ft.B, a_f, b_f, label="c")
    f_B = ft.B.map

    # g side: one fresh point g(c), least consistent type, then the lemma at c
    g = PartialAutomorphism(P, Atilde.g.map)
    E, _ = realize_orbit(g, c, [_first_g_step(g, c)], name="g")
    gt = lemma1_extend(E, c, verify=verify, name="g")
    a_g, b_g, m = gt.a, gt.b, gt.n_final
    C = gt.B.poset
    g_C = gt.B
    cs = [g_C.power(c, i) for i in range(m + 1)]
    _check(cs[-1] == a_g, "g-orbit of c does not end at a_g")

    # d_i sits just above c_i and copies its type over everything else
    ds = []
    for i, ci in enumerate(cs):
        C, di = C.copy_above(ci, label=f"d_{i}")
        ds.append(di)
    f0 = validate_pa(C, f_B | {(a_f, c), (c, ds[0])})
    g0 = validate_pa(C, g_C.map | {(ds[i], ds[i + 1]) for i in range(m)})
    A0 = PaPair(C, f0, g0)
    meta = WitnessMeta(a_f, b_f, c, n, a_g, b_g, m, cs, ds, f_trace=ft, g_trace=gt)
    check_A0(Atilde, A0, meta)
    return A0, meta


def _first_g_step(g: PartialAutomorphism, c):
    succ = _successors(g, _initial_state(g.poset, c))
    if not succ:
        raise InternalInvariantBroken("no consistent type for g(c)")
    return succ[0]


def check_A0(Atilde: PaPair, A0: PaPair, meta: WitnessMeta) -> None:
    P = A0.poset
    _check(is_pa_extension(Atilde, A0), "A0 does not extend the input")
    _check(P.less(meta.a_f, meta.c) and P.less(meta.c, meta.b_f), "a_f < c < b_f fails")
    _check(P.less(meta.b_f, Z), "b_f < z fails")
    _check(A0.f.power(X, meta.n) == meta.a_f, "f^n(x) != a_f")
    _check(P.less(A0.f.power(X, meta.n), Z), "f^n(x) < z fails")
    _check(A0.g.power(meta.c, meta.m) == meta.a_g, "g^m(c) != a_g")
    _check(P.less(meta.a_g, meta.b_g), "a_g < b_g fails")
    for ci, di in zip(meta.cs, meta.ds):
        _check(P.less(ci, di), f"c_i < d_i fails at {ci}")
        _check(di not in A0.g.dom or di != meta.ds[-1], "d_m in dom(g_0)")
        rest = set(P.elements) - {ci, di}
        _check(qf_type(di, rest, P) == qf_type(ci, rest, P), f"d_i type differs at {di}")


def build_A1(A0: PaPair, meta: WitnessMeta) -> PaPair:
    """Literal reading: add ``(g_0^m(c), d_m)`` to g.

    ``g_0`` already sends ``d_{m-1}`` to ``d_m``, so this map is never
    injective for ``m >= 1`` and the call raises.  Kept for the record; see
    :func:`build_A1_repaired`.
    """
    top = A0.g.power(meta.c, meta.m)
    err = pa_problem(A0.poset, A0.g.map | {(top, meta.ds[-1])})
    if err is not None:
        raise InternalInvariantBroken(f"g_1 invalid: {err}")
    return PaPair(A0.poset, A0.f, PartialAutomorphism(A0.poset, A0.g.map | {(top, meta.ds[-1])}))


def build_A2(A0: PaPair, meta: WitnessMeta) -> PaPair:
    """Literal reading: fresh ``e`` between ``g_0^m(c)`` and ``d_m`` with g
    routed through it.  Fails for the same reason as :func:`build_A1`."""
    P = A0.poset
    top = A0.g.power(meta.c, meta.m)
    dm = meta.ds[-1]
    P2, e = P.add_point({top}, {dm}, label="e")
    pairs = A0.g.map | {(top, e), (e, dm)}
    err = pa_problem(P2, pairs)
    if err is not None:
        raise InternalInvariantBroken(f"g_2 invalid: {err}")
    meta.e = e
    return PaPair(P2, PartialAutomorphism(P2, A0.f.map), PartialAutomorphism(P2, pairs))


def _top_point(A0: PaPair, meta: WitnessMeta):
    P, dm = A0.poset, meta.ds[-1]
    P1, p = P.copy_above(dm, label="p")
    _check(P1.less(p, meta.b_g), "p < b_g fails")
    return P1, p


def build_A1_repaired(A0: PaPair, meta: WitnessMeta) -> PaPair:
    """Send ``a_g`` to one fresh point ``p`` under both f and g.

    ``p`` sits just above ``d_m`` inside ``(a_g, b_g)``.  ``g(a_g) > d_m`` is
    forced by ``d_{m-1} < a_g``, which is why ``p`` goes above ``d_m``.
    """
    P1, p = _top_point(A0, meta)
    a = meta.a_g
    f1, g1 = A0.f.map | {(a, p)}, A0.g.map | {(a, p)}
    for name, pairs in (("f_1", f1), ("g_1", g1)):
        err = pa_problem(P1, pairs)
        if err is not None:
            raise InternalInvariantBroken(f"{name} invalid: {err}")
    meta.p = p
    return PaPair.make(P1, f1, g1)


def build_A2_repaired(A0: PaPair, meta: WitnessMeta) -> PaPair:
    """Like :func:`build_A1_repaired` but g stops at a fresh ``q`` with
    ``d_m < q < p``, so ``g(a_g) < f(a_g)``."""
    P1, p = _top_point(A0, meta)
    dm, a = meta.ds[-1], meta.a_g
    P2, q = P1.add_point(P1.down(dm) | {dm}, P1.up(p) | {p}, label="q")
    f2, g2 = A0.f.map | {(a, p)}, A0.g.map | {(a, q)}
    for name, pairs in (("f_2", f2), ("g_2", g2)):
        err = pa_problem(P2, pairs)
        if err is not None:
            raise InternalInvariantBroken(f"{name} invalid: {err}")
    meta.p, meta.q = p, q
    return PaPair.make(P2, f2, g2)


# ---------------------------------------------------------------------------
# words and the obstruction


@dataclass(frozen=True)
class Word:
    """Composition of generator powers, written left to right as in
    ``G^t F^s``; evaluation applies the rightmost factor first."""
    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((gen, int(k)) for gen, k in self.letters))
        for gen, k in self.letters:
            if gen not in ("F", "G") or k < 1:
                raise ValueError(f"bad letter {gen}^{k}")

    def __str__(self):
        return "".join(f"{gen}^{k}" for gen, k in self.letters)

    def to_json(self):
        return [[gen, k] for gen, k in self.letters]

    @classmethod
    def from_json(cls, d):
        return cls(tuple(tuple(x) for x in d))


def eval_word(pair: PaPair, w: Word, start):
    if start not in pair.poset:
        raise PreconditionViolation(f"{start} not in the poset")
    v = start
    for gen, k in reversed(w.letters):
        h = pair.f if gen == "F" else pair.g
        v = h.power(v, k)
        if v is None:
            return None
    return v


EQUAL, STRICTLY_LESS = "Equal", "StrictlyLess"


@dataclass
class ObstructionCertificate:
    base: PaPair
    pair1: PaPair
    pair2: PaPair
    emb1: PaEmbedding
    emb2: PaEmbedding
    w1: Word
    w2: Word
    start: int
    relation_in_1: str = EQUAL
    relation_in_2: str = STRICTLY_LESS
    meta: Optional[WitnessMeta] = None

    def check(self) -> None:
        """Raise :class:`CertificateInvalid` naming the first failing clause."""
        try:
            PaEmbedding(self.base, self.pair1, self.emb1.map)
            PaEmbedding(self.base, self.pair2, self.emb2.map)
        except Exception as exc:
            raise CertificateInvalid(f"base embedding: {exc}") from None
        for name, pair in (("pair1", self.pair1), ("pair2", self.pair2)):
            for h in (pair.f, pair.g):
                if pa_problem(pair.poset, h.map) is not None:
                    raise CertificateInvalid(f"{name} is not a pair of partial automorphisms")
        x1 = self.emb1(self.start)
        x2 = self.emb2(self.start)
        u1, v1 = eval_word(self.pair1, self.w1, x1), eval_word(self.pair1, self.w2, x1)
        u2, v2 = eval_word(self.pair2, self.w1, x2), eval_word(self.pair2, self.w2, x2)
        if None in (u1, v1, u2, v2):
            raise CertificateInvalid("a word evaluation is undefined")
        if self.relation_in_1 != EQUAL or u1 != v1:
            raise CertificateInvalid("relation_in_1: words do not agree in pair1")
        if self.relation_in_2 != STRICTLY_LESS or not self.pair2.poset.less(u2, v2):
            raise CertificateInvalid("relation_in_2: w1 < w2 fails in pair2")

    def to_json(self) -> dict:
        from .io import pair_to_json
        return {
            "base": pair_to_json(self.base),
            "pair1": pair_to_json(self.pair1),
            "pair2": pair_to_json(self.pair2),
            "emb1": [[a, b] for a, b in sorted(self.emb1.map.items())],
            "emb2": [[a, b] for a, b in sorted(self.emb2.map.items())],
            "w1": self.w1.to_json(),
            "w2": self.w2.to_json(),
            "start": self.start,
            "relation_in_1": self.relation_in_1,
            "relation_in_2": self.relation_in_2,
            "meta": None if self.meta is None else self.meta.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "ObstructionCertificate":
        """Rebuild without checking; call :meth:`check` afterwards."""
        from .io import pair_from_json
        base, p1, p2 = (pair_from_json(d[k]) for k in ("base", "pair1", "pair2"))
        try:
            e1 = PaEmbedding(base, p1, {a: b for a, b in d["emb1"]})
            e2 = PaEmbedding(base, p2, {a: b for a, b in d["emb2"]})
        except Exception as exc:
            raise CertificateInvalid(f"base embedding: {exc}") from None
        meta = d.get("meta")
        return cls(base, p1, p2, e1, e2, Word.from_json(d["w1"]), Word.from_json(d["w2"]),
                   d["start"], d.get("relation_in_1", EQUAL), d.get("relation_in_2", STRICTLY_LESS),
                   None if meta is None else WitnessMeta.from_json(meta))

    @property
    def valid(self) -> bool:
        try:
            self.check()
        except CertificateInvalid:
            return False
        return True


LITERAL, REPAIRED = "literal", "repaired"


def obstruction_words(meta: WitnessMeta, variant: str = REPAIRED):
    """``(w1, w2)`` for the chosen reading.  Both start with ``G^m F^{n+1}``,
    which carries x to ``a_g``."""
    if variant == LITERAL:
        return (Word((("G", meta.m + 1), ("F", meta.n + 1))),
                Word((("G", meta.m), ("F", meta.n + 2))))
    if variant == REPAIRED:
        return (Word((("G", meta.m + 1), ("F", meta.n + 1))),
                Word((("F", 1), ("G", meta.m), ("F", meta.n + 1))))
    raise ValueError(f"unknown variant {variant!r}")


def make_certificate(base: PaPair, A1: PaPair, A2: PaPair, meta: WitnessMeta,
                     emb1=None, emb2=None, variant: str = REPAIRED) -> ObstructionCertificate:
    if emb1 is None:
        emb1 = PaEmbedding.inclusion(base, A1)
    if emb2 is None:
        emb2 = PaEmbedding.inclusion(base, A2)
    w1, w2 = obstruction_words(meta, variant)
    cert = ObstructionCertificate(base, A1, A2, emb1, emb2, w1, w2, X, meta=meta)
    cert.check()
    return cert


@dataclass
class Witness:
    Atilde: PaPair
    A0: PaPair
    A1: PaPair
    A2: PaPair
    meta: WitnessMeta
    certificate: ObstructionCertificate
    variant: str = REPAIRED


def build_witness(Atilde: Optional[PaPair] = None, verify: bool = True,
                  variant: str = REPAIRED) -> Witness:
    """Common extension, the two non-amalgamable extensions and a checked
    certificate.  ``variant="literal"`` follows the original indexing and
    raises :class:`InternalInvariantBroken` at ``g_1``."""
    if Atilde is None:
        Atilde = base_pair()
    A0, meta = build_A0(Atilde, verify=verify)
    if variant == LITERAL:
        A1, A2 = build_A1(A0, meta), build_A2(A0, meta)
    elif variant == REPAIRED:
        A1, A2 = build_A1_repaired(A0, meta), build_A2_repaired(A0, meta)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    cert = make_certificate(base_pair(), A1, A2, meta, variant=variant)
    return Witness(Atilde, A0, A1, A2, meta, cert, variant)
