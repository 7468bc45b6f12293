"""Command-line entry point: ``quadric-density <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import delta as delta_mod
from . import sieve
from .counting import SOLVERS, RunConfig, count_nloc
from .errors import FormatError, PartialResultError, ResourceError
from .experiments import (export, export_ratios, ratio_report, verify_omega_vs_solubility,
                          verify_product_formula, verify_symbol_vs_oracle)
from .solubility import DiagonalForm, is_locally_soluble_everywhere

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit(obj):
    print(json.dumps(obj, indent=2))


def cmd_count(args) -> int:
    config = RunConfig(args.height_bound, workers=args.workers, solver=args.solver,
                       thin_removed=not args.no_thin_filter,
                       degenerate=not args.no_degenerate,
                       checkpoint=args.checkpoint, max_seconds=args.max_seconds)
    ledger = count_nloc(config)
    if args.csv:
        export([ledger], args.csv, "csv")
    if args.json:
        export([ledger], args.json, "json")
    _emit(ledger.as_row())
    return EXIT_OK


def cmd_solubility(args) -> int:
    report = is_locally_soluble_everywhere(DiagonalForm(args.coeffs))
    _emit(report.to_dict())
    return EXIT_OK


def cmd_sieve_omega(args) -> int:
    out = {"p": args.prime}
    if args.prime != 2:
        out["formula"] = sieve.omega_size_formula(args.prime)
    if args.brute_force:
        out["brute_force"] = sieve.omega_size_bruteforce(args.prime)
    _emit(out)
    if "formula" in out and "brute_force" in out and out["formula"] != out["brute_force"]:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_sieve_f(args) -> int:
    ev = sieve.f_of_L(args.limit, exact=True if args.exact else None)
    out = {"L": ev.L, "F": ev.approx}
    if args.exact:
        out["exact"] = str(ev.value)
    _emit(out)
    return EXIT_OK


def cmd_sieve_bound(args) -> int:
    if len(args.u) != 4:
        raise FormatError("--u needs four values")
    _emit({"U": args.u, "L": args.limit, "bound": sieve.large_sieve_bound(args.u, args.limit)})
    return EXIT_OK


def cmd_delta(args) -> int:
    data = delta_mod.preset(args.preset) if args.preset else delta_mod.load_fibration(args.fibers)
    _emit({
        "name": data.name,
        "fibers": [{"label": f.label, "delta": str(delta_mod.delta_fiber(f))} for f in data.fibers],
        "Delta": str(delta_mod.delta_total(data)),
    })
    return EXIT_OK


def cmd_verify_omega(args) -> int:
    report = verify_omega_vs_solubility(args.prime, args.bound)
    _emit(report.to_dict())
    return EXIT_VERIFY if report.violations else EXIT_OK


def cmd_verify_oracle(args) -> int:
    report = verify_symbol_vs_oracle(args.samples, args.coeff_bound, args.primes, seed=args.seed)
    failures = verify_product_formula(args.product_samples, seed=args.seed + 1)
    out = report.to_dict()
    out["product_formula"] = {"samples": args.product_samples, "failures": len(failures)}
    _emit(out)
    bad = report.disagreements or report.unknowns or failures
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_report_ratios(args) -> int:
    rows, ledgers = ratio_report(args.height_bounds, workers=args.workers)
    export_ratios(rows, args.csv)
    if args.ledger_csv:
        export(ledgers, args.ledger_csv, "csv")
    _emit(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadric-density", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count locally soluble fibers up to height B")
    p.add_argument("--height-bound", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    out = p.add_mutually_exclusive_group()
    out.add_argument("--csv")
    out.add_argument("--json")
    p.add_argument("--checkpoint")
    p.add_argument("--solver", choices=SOLVERS, default="kernel",
                   help="kernel (default) or a slower verification path")
    p.add_argument("--no-thin-filter", action="store_true")
    p.add_argument("--no-degenerate", action="store_true")
    p.add_argument("--max-seconds", type=float)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("solubility", help="local solubility report for a diagonal form")
    p.add_argument("--coeffs", type=int_list, required=True)
    p.set_defaults(func=cmd_solubility)

    sv = sub.add_parser("sieve").add_subparsers(dest="sieve_command", required=True)
    p = sv.add_parser("omega-size")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--brute-force", action="store_true")
    p.set_defaults(func=cmd_sieve_omega)
    p = sv.add_parser("f")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_sieve_f)
    p = sv.add_parser("bound")
    p.add_argument("--u", type=float_list, required=True)
    p.add_argument("--limit", type=int, required=True)
    p.set_defaults(func=cmd_sieve_bound)

    p = sub.add_parser("delta")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(delta_mod.PRESETS))
    src.add_argument("--fibers")
    p.set_defaults(func=cmd_delta)

    vf = sub.add_parser("verify").add_subparsers(dest="verify_command", required=True)
    p = vf.add_parser("omega")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(func=cmd_verify_omega)
    p = vf.add_parser("oracle")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--coeff-bound", type=int, required=True)
    p.add_argument("--primes", type=int_list, required=True)
    p.add_argument("--product-samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_oracle)

    rp = sub.add_parser("report").add_subparsers(dest="report_command", required=True)
    p = rp.add_parser("ratios")
    p.add_argument("--height-bounds", type=int_list, required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("--ledger-csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_report_ratios)
    return ap


VALUE_FLAGS = {"--coeffs", "--u"}


def _glue_negative_lists(argv: list[str]) -> list[str]:
    # "--coeffs -1,2,3,4" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)  # exact F(L) values have huge numerators
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_lists(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PartialResultError as exc:
        print(f"error: {exc}; checkpoint: {exc.checkpoint}", file=sys.stderr)
        if exc.ledger is not None:
            _emit({"partial": exc.ledger.as_row()})
        return EXIT_RESOURCE
    except (ResourceError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
