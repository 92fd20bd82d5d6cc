"""Command-line driver.

    kolyvagin gen        random instance (or, with --instance, a random RAW collection)
    kolyvagin verify     seeded property suites, or the axioms of one system file
    kolyvagin transform  apply one of the maps between system kinds
    kolyvagin regulator  unit systems and their regulator collections
    kolyvagin cyclo      the cyclotomic instance for given p, k, sigma

Exit codes: 0 all checks pass, 1 a verification failure, 2 a usage or input error.
All output is canonical JSON (sorted keys, integers only).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import cyclo
from .instance import InstanceParams, SevenTuple, random_instance
from .ksystems import TRANSFORMS, Check, KindError, SystemCollection, random_collection
from .unitsys import Chain, UnitSystem, build_unit_systems, regulator_collection
from .verify import (SUITES, RunReport, VerifyConfig, axiom_checks, cyclo_checks, diagram_checks, make_run,
                     regulator_checks, run_axioms_on, run_suite, trial_rng)


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=1) + "\n"


def _emit(data, out: str | None) -> None:
    text = dumps(data)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def _load_instance(path: str | None) -> SevenTuple:
    if not path:
        raise UsageError("--instance is required")
    return SevenTuple.from_json(_load_json(path))


def _load_system(path: str | None, T: SevenTuple) -> SystemCollection:
    if not path:
        raise UsageError("--system is required")
    return SystemCollection.from_json(_load_json(path), T)


def _params(args) -> InstanceParams:
    sites = args.sites if args.sites is not None else (len(args.t) if args.t else 2)
    m = args.m if args.m is not None else 9
    ts = args.t if args.t else (m,) * sites
    if len(ts) != sites:
        raise UsageError(f"--t lists {len(ts)} values for {sites} sites")
    return InstanceParams(m, tuple(ts), args.rank if args.rank is not None else 4)


# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    rng = trial_rng(args.seed, 0)
    if args.instance:
        T = _load_instance(args.instance)
        S = random_collection(T, args.r or 1, rng)
        _emit(S.to_json(), args.out)
    else:
        _emit(random_instance(rng, _params(args)).to_json(), args.out)
    return 0


def _report_exit(report: RunReport, args) -> int:
    _emit(report.to_json(full=args.full), args.out)
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    if args.system or args.instance:
        T = _load_instance(args.instance)
        if args.suite not in ("axioms", "all"):
            raise UsageError("--system files can only be checked with --suite axioms")
        return _report_exit(run_axioms_on(_load_system(args.system, T)), args)
    cfg = VerifyConfig(args.suite, args.trials, args.seed, args.m, args.sites, args.t, args.rank, args.r)
    return _report_exit(run_suite(cfg), args)


def cmd_transform(args) -> int:
    T = _load_instance(args.instance)
    S = _load_system(args.system, T)
    _emit(TRANSFORMS[args.map](S).to_json(), args.out)
    return 0


def _chain(T: SevenTuple, ordering: Sequence[str] | None) -> Chain:
    order = list(ordering) if ordering else list(T.labels)
    if sorted(order) != sorted(T.labels):
        raise UsageError("--ordering must list every site exactly once")
    return Chain.full(order)


def cmd_regulator(args) -> int:
    T = _load_instance(args.instance)
    if args.units:
        eps = UnitSystem.from_json(_load_json(args.units), T)
    else:
        r = args.r or 1
        units = build_unit_systems(T, _chain(T, args.ordering), r)
        rng = trial_rng(args.seed, 0)
        if args.index is not None:
            if not 0 <= args.index < len(units):
                raise UsageError(f"--index must be in [0, {len(units)})")
            eps = units[args.index]
        else:
            eps = units[0].scale(0)
            for e in units:
                eps = eps + e.scale(int(rng.integers(0, T.m)))
    if args.flavor == "units":
        _emit(eps.to_json(), args.out)
    else:
        _emit(regulator_collection(eps, args.flavor).to_json(), args.out)
    return 0


def _cyclo_config(args) -> cyclo.CycloConfig:
    if args.config:
        return cyclo.CycloConfig.from_json(_load_json(args.config))
    k = args.k or 1
    sigma = args.sigma
    if sigma is None:
        if args.bound is None:
            raise UsageError("give --sigma or --bound")
        sigma = tuple(cyclo.sigma_primes(args.p, k, args.bound))
    roots = {}
    for item in args.roots or ():
        ell, _, g = item.partition(":")
        try:
            roots[int(ell)] = int(g)
        except ValueError:
            raise UsageError(f"--roots entries look like 7:3, got {item!r}") from None
    return cyclo.CycloConfig(args.p, k, sigma, args.generators or (2, 5), roots)


def cmd_cyclo(args) -> int:
    if args.config is None and args.p is None:
        raise UsageError("give --config or --p")
    cfg = _cyclo_config(args)
    T = cyclo.build_cyclotomic_instance(cfg)
    if not args.check:
        _emit(T.to_json(), args.out)
        return 0
    report = RunReport("cyclo", args.seed, {"config": cfg.to_json(), "r": args.r or 1})
    violations = T.invariant_violations()
    detail = {"violations": violations} if violations else {}
    report.checks.append(Check("cyclo_invariants", None, None, not violations, detail))
    run = make_run(T, args.r or 1, trial_rng(args.seed, 0))
    report.checks += diagram_checks(run) + axiom_checks(run) + regulator_checks(run, trial_rng(args.seed, 1))
    if args.standard:
        report.checks += cyclo_checks(trial_rng(args.seed, 2))
    return _report_exit(report, args)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=10)
    common.add_argument("--m", type=int)
    common.add_argument("--sites", type=int)
    common.add_argument("--t", type=_int_list, help="comma-separated orders t_q, one per site")
    common.add_argument("--rank", type=int, help="rank h of the free module H")
    common.add_argument("--r", type=int, help="core rank r of the systems")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("--full", action="store_true", help="list every check, not only failures")

    p = argparse.ArgumentParser(prog="kolyvagin", description="Exact verification of algebraic Kolyvagin systems.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="random instance or RAW collection")
    g.add_argument("--instance", help="instance file; emit a random RAW collection over it instead")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="run property suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--instance", help="instance file for --system")
    v.add_argument("--system", help="check the axioms of this system file")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("transform", parents=[common], help="map a system file to another kind")
    t.add_argument("--map", choices=sorted(TRANSFORMS), required=True)
    t.add_argument("--instance", required=True)
    t.add_argument("--system", required=True)
    t.set_defaults(func=cmd_transform)

    r = sub.add_parser("regulator", parents=[common], help="unit systems and regulator collections")
    r.add_argument("--instance", required=True)
    r.add_argument("--units", help="unit-system file (default: build one from the instance)")
    r.add_argument("--ordering", type=_str_list, help="site ordering of the chain")
    r.add_argument("--index", type=int, help="take this generator instead of a seeded combination")
    r.add_argument("--flavor", choices=["P", "T", "K", "units"], default="K")
    r.set_defaults(func=cmd_regulator)

    c = sub.add_parser("cyclo", parents=[common], help="cyclotomic instance over Q")
    c.add_argument("--config", help="CycloConfig JSON file")
    c.add_argument("--p", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--sigma", type=_int_list)
    c.add_argument("--bound", type=int, help="take sigma to be all admissible primes up to this bound")
    c.add_argument("--generators", type=_int_list)
    c.add_argument("--roots", type=_str_list, help="primitive roots as ell:g pairs, e.g. 7:3,13:2")
    c.add_argument("--check", action="store_true", help="run the system checks on the instance")
    c.add_argument("--standard", action="store_true", help="with --check, add the fixed p=3 checks")
    c.set_defaults(func=cmd_cyclo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, KindError, ValueError) as e:
        print(f"kolyvagin {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
