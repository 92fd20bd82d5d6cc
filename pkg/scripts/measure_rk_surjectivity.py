"""Measure how much of the Kolyvagin-system module the regulator R_K reaches.

For each small random instance, computes the order of the module KS_r of
collections passing K1-K4 (by linearizing the axiom residuals over Z/m) and
the order of the span of R_K over all generated unit systems, and prints the
index [KS_r : Im R_K]. Nothing is asserted; index 1 means R_K is onto.

    python scripts/measure_rk_surjectivity.py --trials 20 --seed 0
"""

import argparse
import json
from itertools import combinations
from math import gcd, prod

from kolyvagin.exterior import WedgeTensor
from kolyvagin.gradedalg import GradedElement
from kolyvagin.instance import InstanceParams, random_instance
from kolyvagin.ksystems import SystemCollection, check_axioms
from kolyvagin.linalg import MatrixZm, howell_rows, kernel_generators
from kolyvagin.unitsys import Chain, build_unit_systems, regulator_collection
from kolyvagin.verify import trial_rng


def coordinates(T, r):
    """(n, basis, monomial) triples spanning the KS-shaped module, with their orders."""
    amb = T.sites
    out = []
    for n in amb.subsets():
        for I in combinations(range(T.h), r):
            for mono in amb.monomials(len(n), amb.ordered(n)):
                out.append(((n, I, mono), amb.divisor(mono)))
    return out


def collection_from(T, r, coords, x):
    entries = {}
    for ((n, I, mono), _), a in zip(coords, x):
        if a:
            w = WedgeTensor.basis(I, T.h, T.sites, GradedElement(T.sites, {mono: a}))
            entries[n] = entries[n] + w if n in entries else w
    return SystemCollection(T, r, "KS", entries)


def residual(T, S):
    """Coordinates of lhs - rhs for every axiom check, keyed with the order of the group they live in."""
    out = {}
    for c in check_axioms(S).checks:
        if c.passed:
            continue
        lhs = WedgeTensor.from_json(c.detail["lhs"], _rank(c.detail["lhs"]), T.h, T.sites)
        rhs_json = c.detail["rhs"]
        diff = lhs if not rhs_json else lhs - WedgeTensor.from_json(rhs_json, lhs.r, T.h, T.sites)
        t = T.sites.t_of(c.q) if c.name == "K2" else T.m
        for I, coeff in diff.coeffs.items():
            for mono, a in coeff.terms.items():
                key = (c.name, c.n, c.q, I, mono)
                out[key] = (a, gcd(t, T.sites.divisor(mono)))
    return out


def _rank(data):
    return len(data[0]["basis"]) if data else 0


def span_order(rows, m, ncols):
    return prod(m // next(x for x in row if x) for row in howell_rows(rows, m, ncols)) if rows else 1


def measure(T, r):
    m = T.m
    coords = coordinates(T, r)
    J = len(coords)
    torsion = [[d * int(i == j) for j in range(J)] for i, (_, d) in enumerate(coords)]
    tors_order = span_order(torsion, m, J)
    # linearize: one column per coordinate, one row per residual coordinate
    cols = []
    keys = {}
    for j in range(J):
        x = [int(i == j) for i in range(J)]
        res = residual(T, collection_from(T, r, coords, x))
        cols.append(res)
        for k, (_, e) in res.items():
            keys.setdefault(k, e)
    rows = []
    for k, e in keys.items():
        rows.append([(m // e) * cols[j].get(k, (0, e))[0] % m for j in range(J)])
    kernel = kernel_generators(MatrixZm.from_rows(rows, m, J)) if rows else torsion_free(J)
    ks_order = span_order(kernel + torsion, m, J) // tors_order
    # image of R_K
    index = {c[0]: i for i, c in enumerate(coords)}
    img = []
    for eps in build_unit_systems(T, Chain.full(T.labels), r):
        K = regulator_collection(eps, "K")
        v = [0] * J
        for n, w in K.entries.items():
            for I, coeff in w.coeffs.items():
                for mono, a in coeff.terms.items():
                    v[index[(n, I, mono)]] = a
        img.append(v)
    im_order = span_order(img + torsion, m, J) // tors_order
    return ks_order, im_order


def torsion_free(J):
    return [[int(i == j) for j in range(J)] for i in range(J)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rows = []
    for i in range(args.trials):
        rng = trial_rng(args.seed, i)
        m = int(rng.choice([4, 8, 9]))
        N = int(rng.integers(1, 3))
        h = int(rng.integers(N + 1, N + 3))
        ts = tuple(int(rng.choice([m, 3 if m == 9 else 2])) for _ in range(N))
        T = random_instance(rng, InstanceParams(m, ts, h))
        ks, im = measure(T, 1)
        rows.append({"trial": i, "m": m, "t": list(ts), "h": h, "KS": ks, "image": im, "index": ks // im})
        print(json.dumps(rows[-1], sort_keys=True))
    onto = sum(1 for r in rows if r["index"] == 1)
    print(json.dumps({"onto": onto, "trials": len(rows)}, sort_keys=True))


if __name__ == "__main__":
    main()
