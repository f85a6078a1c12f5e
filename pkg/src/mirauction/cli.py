"""Command-line front end: solve, verify, gen, misreport.

Reports are JSON with a fixed key order and integer-only numerics (ratios
appear as "numerator/denominator" strings), so a command's output is
byte-identical across runs given the same inputs and seeds.  Exit codes:
0 success, 1 failed verification or profitable misreport found, 2 malformed
input or parameters, 3 mechanism/valuation mismatch, 4 size guard tripped.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .core import (
    AuctionError,
    InnerSolverBreach,
    Instance,
    InstanceTooLarge,
    MechanismMismatch,
)
from .half import HalfMechanism
from .lift import INNER_SOLVERS, LiftMechanism
from .ptas import PtasMechanism
from .testkit import (
    BruteMechanism,
    GreedyBaseline,
    RANDOM_KINDS,
    brute_force_opt,
    gen_onepoint,
    gen_random,
    gen_subadditive_hard,
    misreport_search,
)
from .valuations import QueryCountedValuation, dump_instance, load_instance
from .vcg import PAYMENT_RULES, compute_payments

MECHANISMS = ("ptas", "half", "lift", "brute")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text}")
    return value


def _comma_ints(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part != ""]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirauction",
        description="Truthful maximal-in-range mechanisms for multi-unit auctions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mechanism_flags(p, mechanisms):
        p.add_argument("--input", required=True, help="instance JSON file, or - for stdin")
        p.add_argument("--mechanism", required=True, choices=mechanisms)
        p.add_argument("--t", type=int, default=1, help="precision parameter for ptas/lift")
        p.add_argument("--inner", choices=sorted(INNER_SOLVERS), default="exhaustive")
        p.add_argument("--output", default="-", help="report destination (default stdout)")
        p.add_argument("-v", "--verbose", action="store_true", help="timing on stderr")

    p_solve = sub.add_parser("solve", help="run a mechanism on an instance")
    add_mechanism_flags(p_solve, MECHANISMS)
    p_solve.add_argument("--payments", choices=("none",) + PAYMENT_RULES, default="none")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="check a mechanism's ratio against the oracle")
    add_mechanism_flags(p_verify, MECHANISMS)
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    gen_sub = p_gen.add_subparsers(dest="family", required=True)
    p_one = gen_sub.add_parser("onepoint", help="single-threshold bidders")
    p_one.add_argument("--s", type=_comma_ints, required=True, help="thresholds, e.g. 30,70")
    p_one.add_argument("--m", type=int, required=True)
    p_one.add_argument("--output", default="-")
    p_one.set_defaults(func=cmd_gen_onepoint)
    p_hard = gen_sub.add_parser("subadditive-hard", help="two-bidder subadditive hard family")
    p_hard.add_argument("--m", type=int, required=True)
    p_hard.add_argument("--s1", type=int, required=True)
    p_hard.add_argument("--output", default="-")
    p_hard.set_defaults(func=cmd_gen_hard)
    p_rand = gen_sub.add_parser("random", help="seeded random instance")
    p_rand.add_argument("--kind", choices=RANDOM_KINDS, required=True)
    p_rand.add_argument("--n", type=int, required=True)
    p_rand.add_argument("--m", type=int, required=True)
    p_rand.add_argument("--k", type=int, default=2)
    p_rand.add_argument("--value-cap", type=int, default=100)
    p_rand.add_argument("--seed", type=_seed, required=True)
    p_rand.add_argument("--output", default="-")
    p_rand.set_defaults(func=cmd_gen_random)

    p_mis = sub.add_parser("misreport", help="hunt for a profitable lie")
    add_mechanism_flags(p_mis, MECHANISMS + ("greedy",))
    p_mis.add_argument("--bidder", type=int, required=True)
    p_mis.add_argument("--samples", type=int, required=True)
    p_mis.add_argument("--seed", type=_seed, required=True)
    p_mis.set_defaults(func=cmd_misreport)

    return parser


def _read_instance(path: str) -> Instance:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    return load_instance(text)


def _make_mechanism(args):
    name = args.mechanism
    if name == "ptas":
        if args.t < 0:
            raise ValueError(f"--t must be non-negative, got {args.t}")
        return PtasMechanism(args.t)
    if name == "half":
        return HalfMechanism()
    if name == "lift":
        if args.t < 0:
            raise ValueError(f"--t must be non-negative, got {args.t}")
        inner = INNER_SOLVERS[args.inner](max(args.t, 1))
        return LiftMechanism(inner, args.t)
    if name == "brute":
        return BruteMechanism()
    return GreedyBaseline()


def _config_block(args) -> dict:
    return {
        "t": args.t if args.mechanism in ("ptas", "lift") else None,
        "inner": args.inner if args.mechanism == "lift" else None,
    }


def _emit(text: str, output: str) -> None:
    if output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit_report(report: dict, output: str) -> None:
    _emit(json.dumps(report, indent=2) + "\n", output)


def _counted(instance: Instance) -> Instance:
    return Instance(instance.m, tuple(QueryCountedValuation(v) for v in instance.bidders))


def _timed_solve(mechanism, instance, verbose: bool):
    start = time.perf_counter()
    result = mechanism.solve(instance)
    if verbose:
        print(f"{mechanism.name}: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return result


def cmd_solve(args) -> int:
    instance = _counted(_read_instance(args.input))
    mechanism = _make_mechanism(args)
    result = _timed_solve(mechanism, instance, args.verbose)
    query_count = sum(v.query_count for v in instance.bidders)
    payments = None
    if args.payments != "none":
        payments = list(compute_payments(instance, mechanism, args.payments, result))
    report = {
        "mechanism": args.mechanism,
        "config": {**_config_block(args), "payments": args.payments},
        "m": instance.m,
        "n": instance.n,
        "allocation": list(result.allocation),
        "welfare": result.welfare,
        "payments": payments,
        "witness": result.witness,
        "query_count": query_count,
    }
    _emit_report(report, args.output)
    return 0


def cmd_verify(args) -> int:
    instance = _counted(_read_instance(args.input))
    mechanism = _make_mechanism(args)
    result = _timed_solve(mechanism, instance, args.verbose)
    query_count = sum(v.query_count for v in instance.bidders)
    _, opt = brute_force_opt(instance)
    guarantee: Fraction = mechanism.guarantee(instance.n)
    ok = result.welfare * guarantee.denominator >= guarantee.numerator * opt
    report = {
        "mechanism": args.mechanism,
        "config": _config_block(args),
        "m": instance.m,
        "n": instance.n,
        "allocation": list(result.allocation),
        "welfare": result.welfare,
        "witness": result.witness,
        "query_count": query_count,
        "verification": {
            "opt": opt,
            "ratio": f"{result.welfare}/{opt}",
            "guarantee": f"{guarantee.numerator}/{guarantee.denominator}",
            "pass": ok,
        },
    }
    _emit_report(report, args.output)
    return 0 if ok else 1


def cmd_gen_onepoint(args) -> int:
    _emit(dump_instance(gen_onepoint(args.s, args.m)), args.output)
    return 0


def cmd_gen_hard(args) -> int:
    _emit(dump_instance(gen_subadditive_hard(args.m, args.s1)), args.output)
    return 0


def cmd_gen_random(args) -> int:
    instance = gen_random(args.kind, args.n, args.m, args.k, args.value_cap, args.seed)
    _emit(dump_instance(instance), args.output)
    return 0


def cmd_misreport(args) -> int:
    instance = _read_instance(args.input)
    mechanism = _make_mechanism(args)
    report = misreport_search(mechanism, instance, args.bidder, args.samples, args.seed)
    payload = {
        "mechanism": args.mechanism,
        "config": _config_block(args),
        "bidder": report.bidder,
        "samples": report.samples,
        "seed": args.seed,
        "gain": report.gain,
        "witness": report.witness,
    }
    _emit_report(payload, args.output)
    return 1 if report.gain > 0 else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MechanismMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except InnerSolverBreach as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (AuctionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
