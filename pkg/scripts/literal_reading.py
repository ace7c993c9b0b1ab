"""Show why the literal A1/A2 are not pairs of partial automorphisms and why
the literal words are forced into w1(x) > w2(x)."""
from poset_amalgam.errors import InternalInvariantBroken
from poset_amalgam.generators import cuts
from poset_amalgam.partial_auto import is_pa
from poset_amalgam.witness import build_A0, build_A1, build_A2, base_pair


def main():
    A0, meta = build_A0(base_pair())
    P, g0 = A0.poset, A0.g
    dm, dm1, top = meta.ds[-1], meta.ds[-2], meta.a_g
    print(f"n={meta.n} m={meta.m}; g_0({P.label(dm1)}) = {P.label(g0(dm1))}")
    for build in (build_A1, build_A2):
        try:
            build(A0, meta)
        except InternalInvariantBroken as exc:
            print(f"{build.__name__}: {exc}")
    print(f"{P.label(dm1)} < a_g: {P.less(dm1, top)}, so any g(a_g) lies above {P.label(dm)}")
    above = total = 0
    for below, up in cuts(P):
        Q, t = P.add_point(below, up)
        if is_pa(Q, g0.map | {(top, t)}):
            total += 1
            above += Q.less(dm, t)
    print(f"one-point choices for g(a_g): {total}, of which above d_m: {above}")


if __name__ == "__main__":
    main()
