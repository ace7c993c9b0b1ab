"""Command-line front end.

Exit codes: 0 success / amalgam found / certificate valid, 1 refuted / no
amalgam / invalid, 2 search budget or bound exhausted, 3 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .amalgam import amalgam_exists, jep_join
from .errors import (BoundExhausted, CertificateInvalid, InternalInvariantBroken, PosetError,
                     ResourceLimit)
from .generators import make_rng, random_pa_extension, random_pa_pair
from .io import pa_to_json, pair_from_json, pair_to_dot, pair_to_json
from .lemma1 import lemma1_extend
from .partial_auto import PaEmbedding
from .witness import LITERAL, REPAIRED, X, ObstructionCertificate, base_pair, build_witness

OK, REFUTED, EXHAUSTED, BAD_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_pair(path: str):
    data = _load_json(path)
    try:
        return pair_from_json(data)
    except (PosetError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a valid pair: {exc!r}") from None


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_jep(args) -> int:
    P1, P2 = _load_pair(args.left), _load_pair(args.right)
    C, e1, e2 = jep_join(P1, P2)
    _emit({"join": pair_to_json(C),
           "emb_left": sorted([a, b] for a, b in e1.map.items()),
           "emb_right": sorted([a, b] for a, b in e2.map.items())}, args.out)
    return OK


def cmd_lemma1(args) -> int:
    pair = _load_pair(args.input)
    h = pair.f if args.map == "f" else pair.g
    try:
        tr = lemma1_extend(h, args.s, m_max=args.m_max, new_points_max=args.new_points_max,
                           name=args.map)
    except (PosetError, KeyError) as exc:
        if isinstance(exc, (BoundExhausted, InternalInvariantBroken)):
            raise
        raise InputError(f"lemma hypothesis fails: {exc}") from None
    out = tr.to_json() if args.trace else {"n": tr.n_final, "a": tr.a, "b": tr.b,
                                          "result": pa_to_json(tr.B)}
    _emit(out, args.out)
    return OK


def _proof_sketch(W) -> str:
    c, meta = W.certificate, W.meta
    u1, v1 = (_ev(W.A1, w) for w in (c.w1, c.w2))
    u2, v2 = (_ev(W.A2, w) for w in (c.w1, c.w2))
    lab1, lab2 = W.A1.poset.label, W.A2.poset.label
    return "\n".join([
        f"x's f-orbit reaches a_f after n = {meta.n} steps; c = f(a_f) sits in (a_f, b_f).",
        f"c's g-orbit reaches a_g after m = {meta.m} steps; g is free in (a_g, b_g).",
        f"w1 = {c.w1}, w2 = {c.w2}.",
        f"In A1: w1(x) = {lab1(u1)} and w2(x) = {lab1(v1)}, so they are equal.",
        f"In A2: w1(x) = {lab2(u2)} < w2(x) = {lab2(v2)}.",
        "Any amalgam over the base identifies both copies of x, hence both copies of",
        "w1(x) and of w2(x); the two relations cannot hold at once.",
    ]) + "\n"


def _ev(pair, w):
    from .witness import eval_word
    return eval_word(pair, w, X)


def cmd_wap_demo(args) -> int:
    Atilde = _load_pair(args.atilde) if args.atilde else base_pair()
    try:
        W = build_witness(Atilde, variant=args.variant)
    except InternalInvariantBroken as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return REFUTED
    cert = W.certificate.to_json()
    summary = {"variant": W.variant, "meta": W.meta.to_json(),
               "w1": str(W.certificate.w1), "w2": str(W.certificate.w2),
               "sizes": {"A0": len(W.A0.poset), "A1": len(W.A1.poset), "A2": len(W.A2.poset)}}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, pair in (("Atilde", W.Atilde), ("A0", W.A0), ("A1", W.A1), ("A2", W.A2)):
            _emit(pair_to_json(pair), out / f"{name}.json")
            (out / f"{name}.dot").write_text(pair_to_dot(pair, name))
        _emit(pair_to_json(base_pair()), out / "base.json")
        _emit(W.meta.to_json(), out / "meta.json")
        _emit(cert, out / "certificate.json")
        (out / "proof.txt").write_text(_proof_sketch(W))
    else:
        summary["certificate"] = cert
        summary["proof"] = _proof_sketch(W)
    _emit(summary)
    return OK


def cmd_amalgam(args) -> int:
    A, B, C = (_load_pair(p) for p in (args.base, args.left, args.right))
    try:
        eB, eC = PaEmbedding.inclusion(A, B), PaEmbedding.inclusion(A, C)
    except PosetError as exc:
        raise InputError(f"base is not a substructure of both sides: {exc}") from None
    res = amalgam_exists(A, B, C, eB, eC, max_nodes=args.max_nodes)
    if res is None:
        _emit({"amalgam": None}, args.out)
        return REFUTED
    _emit({"amalgam": pair_to_json(res.D),
           "emb_left": sorted([a, b] for a, b in res.emb_left.map.items()),
           "emb_right": sorted([a, b] for a, b in res.emb_right.map.items())}, args.out)
    return OK


def cmd_certify(args) -> int:
    data = _load_json(args.cert)
    try:
        cert = ObstructionCertificate.from_json(data)
        cert.check()
    except CertificateInvalid as exc:
        print(f"invalid: {exc.clause if hasattr(exc, 'clause') else exc}", file=sys.stderr)
        return REFUTED
    except (PosetError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.cert}: malformed certificate: {exc!r}") from None
    print("valid")
    return OK


def cmd_gen(args) -> int:
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for i in range(args.count):
            if args.kind == "pair":
                rng = make_rng(args.seed + i)
                n = int(rng.integers(1, args.size + 1))
                pair = random_pa_pair(n, rng)
            else:
                pair = random_pa_extension(base_pair(), args.steps, args.seed + i,
                                           max_size=args.size)
            out.write(json.dumps(pair_to_json(pair), sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="poset-amalgam", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("jep", help="joint embedding of two pairs")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_jep)

    s = sub.add_parser("lemma1", help="free-interval extension of one map")
    s.add_argument("--input", required=True, help="pair JSON")
    s.add_argument("--s", type=int, required=True, help="start point id")
    s.add_argument("--map", choices=("f", "g"), default="f")
    s.add_argument("--m-max", type=int)
    s.add_argument("--new-points-max", type=int)
    s.add_argument("--trace", action="store_true", help="emit the full stage trace")
    s.add_argument("--out")
    s.set_defaults(func=cmd_lemma1)

    s = sub.add_parser("wap-demo", help="build the non-amalgamable pair and its certificate")
    s.add_argument("--atilde", help="extension of the base pair (default: the base pair)")
    s.add_argument("--variant", choices=(REPAIRED, LITERAL), default=REPAIRED)
    s.add_argument("--out", help="directory for JSON, DOT and the certificate")
    s.set_defaults(func=cmd_wap_demo)

    s = sub.add_parser("amalgam", help="decide amalgamation over a common base")
    s.add_argument("--base", required=True)
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--max-nodes", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_amalgam)

    s = sub.add_parser("certify", help="re-check an obstruction certificate")
    s.add_argument("--cert", required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("gen", help="seeded random pairs as JSON lines")
    s.add_argument("--kind", choices=("pair", "extension"), default="pair")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--size", type=int, default=6)
    s.add_argument("--steps", type=int, default=8)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (ResourceLimit, BoundExhausted) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())
