"""Command-line interface: ``seqdecomp {gen,decompose,ann,minpoly,verify,bench}``.

Exit codes: 0 success, 2 genericity failure (random choices kept failing),
3 verification failure, 4 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .annihilator import generic_ann, mmm_ann
from .decompose import REPRESENTATIONS, STRATEGIES, DecompositionReport, decompose, radical_param, verify_report
from .errors import FieldError, GenericityFailure, InputError, SchemaError, VerificationFailed
from .field import make_prime_field
from .instances import ComponentTruth, GroundTruth, gen_instance, golden_gb, golden_instance, parse_component, random_specs
from .oracle import brute_hankel_ann
from .quotient import CostCounter, IdealInstance, MonomialCache, load_instance
from .unipoly import UniPoly, is_irreducible

log = logging.getLogger("seqdecomp")

EXIT_OK, EXIT_GENERICITY, EXIT_VERIFY, EXIT_INPUT = 0, 2, 3, 4
BENCH_COLUMNS = ["instance_id", "D", "n", "strategy", "matvec_total", "wall_ms"]


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc


def _emit(doc, out: str | None) -> None:
    text = json.dumps(doc) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str, paranoid: bool) -> IdealInstance:
    return load_instance(_read_json(path), check_commutation=paranoid)


def truth_path(out: str) -> str:
    p = Path(out)
    return str(p.with_name(p.stem + ".truth" + p.suffix))


# -- subcommands ---------------------------------------------------------------

def cmd_gen(args) -> int:
    ctx = make_prime_field(args.field)
    rng = random.Random(args.seed)
    if args.spec == ["golden"]:
        P = UniPoly.from_ints(ctx, [2, 1, 1])
        if not is_irreducible(P):
            raise InputError(f"Z^2 + Z + 2 is reducible mod {ctx.p}; pick another prime")
        gb = golden_gb(ctx)
        inst = golden_instance(ctx)
        truth = GroundTruth(ctx, 2, [ComponentTruth(P, 2, 2, gb.degree, gb)], args.seed)
    else:
        if args.random:
            specs = random_specs(ctx, args.n, rng, args.max_dim)
        elif args.spec:
            specs = [parse_component(s, ctx, args.n, rng) for s in args.spec]
        else:
            raise InputError("give --spec (repeatable) or --random")
        inst, truth = gen_instance(specs, ctx, args.n, args.seed, args.conjugate)
    if args.paranoid:
        inst.check_commutation()
    _emit(inst.to_json(), args.out)
    if args.out:
        _emit(truth.to_json(), truth_path(args.out))
    log.info("generated instance: n = %d, D = %d, %d components", inst.n, inst.dim, len(truth.components))
    return EXIT_OK


def cmd_decompose(args) -> int:
    inst = _load(args.input, args.paranoid)
    reps = [r for r in args.repr.split(",") if r]
    bad = set(reps) - set(REPRESENTATIONS)
    if bad:
        raise InputError(f"unknown representation(s) {sorted(bad)}")
    report = decompose(inst, args.strategy, reps, args.seed, args.verify, args.retries, args.r)
    _emit(report.to_json(), args.out)
    log.info("%d components, %d matvecs in total", report.K, report.cost.matvec)
    return EXIT_OK


def _read_forms(path: str, inst: IdealInstance) -> list[list]:
    doc = _read_json(path)
    rows = doc.get("forms") if isinstance(doc, dict) else doc
    if not isinstance(rows, list) or not rows:
        raise SchemaError("forms file must hold a nonempty list of row vectors")
    ctx = inst.field
    forms = []
    for row in rows:
        if not isinstance(row, list) or len(row) != inst.dim:
            raise InputError(f"each form must have length {inst.dim}")
        forms.append([ctx.from_json(v) for v in row])
    return forms


def cmd_ann(args) -> int:
    inst = _load(args.input, args.paranoid)
    forms = _read_forms(args.forms, inst)
    cost = CostCounter()
    if args.algorithm == "mmm":
        gb = mmm_ann(forms, inst, cache=MonomialCache(inst, cost))
    elif args.algorithm == "generic":
        last = UniPoly.from_json(inst.field, json.loads(args.last_minpoly)) if args.last_minpoly else None
        gb = generic_ann(forms, inst, B=args.bound, known_last_minpoly=last, cost=cost)
    else:
        gb = brute_hankel_ann(forms, inst, args.degree)
    _emit({**gb.to_json(), "cost": cost.as_dict()}, args.out)
    return EXIT_OK


def cmd_minpoly(args) -> int:
    inst = _load(args.input, args.paranoid)
    cache = MonomialCache(inst)
    pmin, P, G = radical_param(inst, args.seed, args.retries, cache)
    doc = {
        "pmin": pmin.to_json(),
        "radical": {"p": P.to_json(), "g": [g.to_json() for g in G]},
        "cost": cache.cost.as_dict(),
        "seed": args.seed,
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load(args.instance, args.paranoid)
    try:
        report = DecompositionReport.from_json(_read_json(args.report))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed report: {exc}") from exc
    verify_report(report, inst, args.mode, args.seed)
    if args.truth:
        truth = GroundTruth.from_json(_read_json(args.truth)).by_pk()
        for comp in report.components:
            expected = truth.get(tuple(comp.pk.coeffs))
            if expected is None or expected.lex_gb != comp.lex_gb:
                raise VerificationFailed(f"component {comp.pk.format()} differs from the ground truth")
        if len(truth) != len(report.components):
            raise VerificationFailed("number of components differs from the ground truth")
    log.info("report verified (%s)", args.mode)
    return EXIT_OK


def bench_rows(
    count: int, ns: Sequence[int], max_dim: int, p: int, seed: int, strategies: Sequence[str], conjugate: bool
) -> list[dict]:
    ctx = make_prime_field(p)
    rows = []
    for i in range(count):
        rng = random.Random(seed * 100003 + i)
        n = ns[i % len(ns)]
        inst, _ = gen_instance(random_specs(ctx, n, rng, max_dim), ctx, n, seed + i, conjugate)
        for strategy in strategies:
            t0 = time.perf_counter()
            report = decompose(inst, strategy, ("lex",), seed + i)
            wall = (time.perf_counter() - t0) * 1000
            rows.append(
                {
                    "instance_id": i,
                    "D": inst.dim,
                    "n": n,
                    "strategy": strategy,
                    "matvec_total": report.cost.matvec,
                    "wall_ms": round(wall, 3),
                }
            )
    return rows


def cmd_bench(args) -> int:
    strategies = [s for s in args.strategy.split(",") if s]
    if set(strategies) - set(STRATEGIES):
        raise InputError(f"unknown strategy in {args.strategy!r}")
    ns = [int(x) for x in args.n.split(",")]
    rows = bench_rows(args.count, ns, args.max_dim, args.field, args.seed, strategies, args.conjugate)
    fh = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.csv:
            fh.close()
    if args.plot:
        from .plotting import plot_bench

        plot_bench(rows, args.plot)
        log.info("figure written to %s", args.plot)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqdecomp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--paranoid", action="store_true", help="check that the matrices commute")
        p.add_argument("--out", help="output file (default: stdout)")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", help="generate an instance and its ground truth")
    p.add_argument("--spec", action="append", default=[], help="component: fat:origin:e=2, fat:1,2:e=3, point:4,5, curv:f=2:e=2, or golden")
    p.add_argument("--random", action="store_true", help="draw a random mix of components")
    p.add_argument("--field", type=int, default=10007, help="prime characteristic")
    p.add_argument("--n", type=int, default=2, help="number of variables")
    p.add_argument("--max-dim", type=int, default=20)
    p.add_argument("--conjugate", action="store_true", help="apply a random change of basis")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", help="primary decomposition of an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="generic")
    p.add_argument("--repr", default="lex", help="comma-separated subset of lex,ext,origin")
    p.add_argument("--verify", choices=("none", "probabilistic", "oracle"), default="probabilistic")
    p.add_argument("--retries", type=int, default=5)
    p.add_argument("--r", type=int, default=2, help="independent verification forms on termination")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("ann", help="annihilator of the sequences of explicit linear forms")
    p.add_argument("--input", required=True)
    p.add_argument("--forms", required=True, help='JSON file {"forms": [[...], ...]}')
    p.add_argument("--algorithm", choices=("mmm", "generic", "brute"), default="mmm")
    p.add_argument("--bound", type=int, default=1, help="degree bound B for the generic algorithm")
    p.add_argument("--last-minpoly", help="JSON coefficient list of the known minimal polynomial of X_n")
    p.add_argument("--degree", type=int, help="degree bound for the brute-force algorithm (default D)")
    common(p, seed=False)
    p.set_defaults(func=cmd_ann)

    p = sub.add_parser("minpoly", help="minimal polynomial of X_n and radical parametrization")
    p.add_argument("--input", required=True)
    p.add_argument("--retries", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_minpoly)

    p = sub.add_parser("verify", help="re-check a report against its instance")
    p.add_argument("--report", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=("probabilistic", "oracle"), default="oracle")
    p.add_argument("--truth", help="ground-truth file written by gen")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paranoid", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="matvec counts and timings over generated instances")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--n", default="2,3", help="comma-separated variable counts, cycled")
    p.add_argument("--max-dim", type=int, default=20)
    p.add_argument("--field", type=int, default=10007)
    p.add_argument("--strategy", default="mmm,generic")
    p.add_argument("--conjugate", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="CSV output file (default: stdout)")
    p.add_argument("--plot", help="PNG figure of the sweep")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except GenericityFailure as exc:
        log.error("genericity failure: %s", exc)
        return EXIT_GENERICITY
    except VerificationFailed as exc:
        log.error("verification failed: %s", exc)
        return EXIT_VERIFY
    except (InputError, FieldError, OSError) as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
