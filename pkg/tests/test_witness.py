import pytest

from poset_amalgam.amalgam import amalgam_exists
from poset_amalgam.errors import CertificateInvalid, InternalInvariantBroken
from poset_amalgam.generators import cuts, random_pa_extension
from poset_amalgam.partial_auto import PaEmbedding, PaPair, is_pa, is_pa_extension
from poset_amalgam.witness import (EQUAL, LITERAL, X, Z, ObstructionCertificate, Word,
                                   base_pair, build_A0, build_A1, build_A2, build_witness,
                                   eval_word, make_certificate, obstruction_words)


def test_base_pair_shape(base):
    P = base.poset
    assert P.less(0, 1) and P.less(1, 2)
    assert base.f.map == {(0, 1), (2, 2)}
    assert base.g.map == {(0, 2)}


def test_A0_named_points(witness):
    A0, meta = witness.A0, witness.meta
    P = A0.poset
    assert (meta.n, meta.m) == (3, 3)
    assert A0.f.power(X, meta.n) == meta.a_f
    assert A0.f(meta.a_f) == meta.c and A0.f(meta.c) == meta.ds[0]
    assert P.less(meta.b_f, Z) and P.less(meta.a_f, Z)
    assert A0.g.power(meta.c, meta.m) == meta.a_g
    assert A0.g.power(meta.ds[0], meta.m) == meta.ds[-1]
    assert P.less(meta.a_g, meta.ds[-1]) and P.less(meta.ds[-1], meta.b_g)
    assert is_pa_extension(base_pair(), A0)


def test_literal_extensions_are_not_injective(witness):
    with pytest.raises(InternalInvariantBroken, match="not injective"):
        build_A1(witness.A0, witness.meta)
    with pytest.raises(InternalInvariantBroken, match="not injective"):
        build_A2(witness.A0, witness.meta)
    with pytest.raises(InternalInvariantBroken):
        build_witness(variant=LITERAL)


def test_literal_relation_is_forced(witness):
    """Whatever g(a_g) is in an extension of A0, it lies strictly above d_m,
    so the literal words can be neither equal nor ordered w1 < w2."""
    A0, meta = witness.A0, witness.meta
    P, g0, a, dm = A0.poset, A0.g, meta.a_g, meta.ds[-1]
    options = 0
    for t in P.elements:
        if t not in g0.rng and is_pa(P, g0.map | {(a, t)}):
            options += 1
            assert P.less(dm, t)
    for below, above in cuts(P):
        Q, t = P.add_point(below, above)
        if is_pa(Q, g0.map | {(a, t)}):
            options += 1
            assert Q.less(dm, t)
    assert options > 0


def test_repaired_certificate(witness):
    cert = witness.certificate
    assert cert.valid
    w1, w2 = obstruction_words(witness.meta)
    assert str(w1) == f"G^{witness.meta.m + 1}F^{witness.meta.n + 1}"
    assert cert.relation_in_1 == EQUAL
    u = eval_word(witness.A1, w1, X)
    assert u == eval_word(witness.A1, w2, X) == witness.meta.p
    assert witness.A2.poset.less(eval_word(witness.A2, w1, X), eval_word(witness.A2, w2, X))


def test_words_share_prefix_to_a_g(witness):
    meta = witness.meta
    prefix = Word((("G", meta.m), ("F", meta.n + 1)))
    for pair in (witness.A0, witness.A1, witness.A2):
        assert eval_word(pair, prefix, X) == meta.a_g


def test_swapped_words_rejected(witness):
    c = witness.certificate
    bad = ObstructionCertificate(c.base, c.pair1, c.pair2, c.emb1, c.emb2, c.w2, c.w1, c.start)
    with pytest.raises(CertificateInvalid, match="relation_in_2"):
        bad.check()


def test_tampered_A2_rejected(witness):
    A2, meta = witness.A2, witness.meta
    g = A2.g.map - {(meta.a_g, meta.q)}
    tampered = PaPair.make(A2.poset, A2.f.map, g)
    with pytest.raises(CertificateInvalid):
        make_certificate(base_pair(), witness.A1, tampered, meta)


def test_same_side_twice_rejected(witness):
    with pytest.raises(CertificateInvalid, match="relation_in_2"):
        make_certificate(base_pair(), witness.A1, witness.A1, witness.meta)


def test_certificate_json_round_trip(witness):
    d = witness.certificate.to_json()
    again = ObstructionCertificate.from_json(d)
    again.check()
    assert again.to_json() == d


def test_repaired_pair_has_no_amalgam(witness):
    A = base_pair()
    res = amalgam_exists(A, witness.A1, witness.A2, PaEmbedding.inclusion(A, witness.A1),
                         PaEmbedding.inclusion(A, witness.A2))
    assert res is None


def test_each_side_amalgamates_with_itself(witness):
    A = base_pair()
    e = PaEmbedding.inclusion(A, witness.A1)
    assert amalgam_exists(A, witness.A1, witness.A1, e, e) is not None


def test_rejects_non_extension():
    other = PaPair.make(base_pair().poset, [(0, 1)], [(0, 2)])
    from poset_amalgam.errors import PreconditionViolation
    with pytest.raises(PreconditionViolation):
        build_A0(other)


@pytest.mark.parametrize("seed", range(5))
def test_random_atilde(seed):
    At = random_pa_extension(base_pair(), 8, seed, max_size=6)
    W = build_witness(At)
    assert W.certificate.valid
    assert is_pa_extension(At, W.A0)
    assert is_pa_extension(W.A0, W.A1)
    assert is_pa_extension(W.A0, W.A2)
