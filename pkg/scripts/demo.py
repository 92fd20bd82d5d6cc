"""Walk one random instance through the whole pipeline and print what happens.

    python scripts/demo.py --m 9 --t 3,9 --rank 4 --r 1 --seed 3
"""

import argparse

from kolyvagin.gradedalg import format_graded
from kolyvagin.instance import InstanceParams, random_instance
from kolyvagin.ksystems import check_axioms, f_dk, f_pk, f_pt, f_td, f_tk, g_pk
from kolyvagin.unitsys import Chain, build_unit_systems, regulator_collection, regulator_module_span
from kolyvagin.verify import trial_rng


def show(S, title):
    print(f"{title} [{S.kind}]")
    for n in S.subsets():
        w = S[n]
        label = "{" + ",".join(S.instance.sites.ordered(n)) + "}"
        terms = ", ".join(f"e{''.join(str(i + 1) for i in I)}: {format_graded(c)}" for I, c in sorted(w.coeffs.items()))
        print(f"  {label:>12}  {terms or '0'}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=9)
    ap.add_argument("--t", default="3,9")
    ap.add_argument("--rank", type=int, default=4)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    ts = tuple(int(x) for x in args.t.split(","))
    T = random_instance(trial_rng(args.seed, 0), InstanceParams(args.m, ts, args.rank))
    print(f"instance: Z/{T.m}, sites {list(T.labels)} with t = {list(ts)}, H = O^{T.h}")
    for q in T.labels:
        print(f"  v_{q} = {list(T.v[q])}  u_{q} = {list(T.u[q])}  P_{q} = {format_graded(T.P[q])}")

    chain = Chain.full(T.labels)
    units = build_unit_systems(T, chain, args.r)
    print(f"\n{len(units)} unit-system generators along {list(chain.ordering)}")
    eps = units[0]
    for e in units[1:]:
        eps = eps + e.scale(2)

    RP, RT, RK = (regulator_collection(eps, f) for f in "PTK")
    show(RK, "\nR_K")
    print("\naxioms:", {S.kind: check_axioms(S).passed for S in (RP, RT, RK, f_td(RT))})
    print("F_PT(R_P) = R_T:", f_pt(RP) == RT, "  F_PK(R_P) = R_K:", f_pk(RP) == RK)
    print("F_TK(R_T) = R_K:", f_tk(RT) == RK, "  F_DK F_TD = F_TK:", f_dk(f_td(RT)) == f_tk(RT))
    print("G_PK(R_K) = R_P:", g_pk(RK) == RP)
    inside = all(RT[n] in regulator_module_span(T, n, args.r) for n in T.sites.subsets())
    print("R_T(eps)_n in R_n for every n:", inside)


if __name__ == "__main__":
    main()
