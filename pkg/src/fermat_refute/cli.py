"""Command-line driver: ``check``, ``search``, ``selftest`` and ``bench``.

Exit codes: 0 completed without oracle solutions, 1 usage or configuration
error, 2 oracle solution found, 3 internal consistency failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import selftest
from .arith import is_odd_prime
from .bench import format_table, run_bench
from .errors import ConfigError, SearchAborted
from .filters import (
    DEFAULT_MODULI,
    DEFAULT_PIPELINE,
    THEOREM_PIPELINE,
    Candidate,
    certificate_line,
    evaluate,
    validate_moduli,
    validate_pipeline,
)
from .search import SearchConfig, oracle_check, run_search, write_report, write_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLUTION = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _natural(text: str) -> int:
    try:
        v = int(text.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _int_list(text: str) -> tuple[int, ...]:
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty list")
    return tuple(_natural(t) for t in parts)


def _name_list(text: str) -> tuple[str, ...]:
    parts = [t.strip() for t in text.split(",") if t.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty list")
    return tuple(parts)


def _add_pipeline_flags(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--pipeline", type=_name_list, default=None,
                   help=f"comma-separated filter ids, applied in order (default {default})")
    p.add_argument("--moduli", type=_int_list, default=None,
                   help="moduli for the MODULAR filter (default 9,25,49)")
    p.add_argument("--allow-external", action="store_true",
                   help="permit T1_EXTERNAL, which rests on an external theorem")
    p.add_argument("--generalized", action="store_true",
                   help="admit exponents outside the odd primes (filters are skipped for them)")


def _add_range_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max", type=_natural, default=None, help="bound for x, y and z")
    p.add_argument("--x-max", type=_natural, default=None)
    p.add_argument("--y-max", type=_natural, default=None)
    p.add_argument("--z-max", type=_natural, default=None)
    p.add_argument("--p", type=_int_list, required=True, help="comma-separated exponents")
    p.add_argument("--coprime-only", action="store_true")
    p.add_argument("--all-orders", action="store_true", help="enumerate x > y as well")
    p.add_argument("--z-above-y", action="store_true", help="only enumerate y < z")
    p.add_argument("--workers", type=_natural, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fermat-refute", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="run the filters on one candidate")
    for name in ("x", "y", "z", "p"):
        check.add_argument(name, type=_natural)
    _add_pipeline_flags(check, ",".join(THEOREM_PIPELINE))
    check.add_argument("--json-lines", action="store_true", help="emit one JSON record")

    srch = sub.add_parser("search", help="sweep a range of candidates")
    _add_range_flags(srch)
    _add_pipeline_flags(srch, ",".join(DEFAULT_PIPELINE))
    srch.add_argument("--certificates", type=Path, default=None, help="JSON-lines certificate output")
    srch.add_argument("--report", type=Path, default=None, help="JSON report output")
    srch.add_argument("--table", type=Path, default=None,
                      help="CSV per-filter counts (default: report path with .csv)")
    srch.add_argument("--no-verify", action="store_true",
                      help="skip re-checking certificates during the sweep")

    sub.add_parser("selftest", help="run the built-in consistency suites")

    bench = sub.add_parser("bench", help="time filters against the exact oracle")
    _add_range_flags(bench)
    _add_pipeline_flags(bench, ",".join(DEFAULT_PIPELINE))
    return parser


def config_from_args(args: argparse.Namespace) -> SearchConfig:
    bounds = {}
    for name in ("x_max", "y_max", "z_max"):
        v = getattr(args, name)
        bounds[name] = v if v is not None else args.max
        if bounds[name] is None:
            raise ConfigError(f"--{name.replace('_', '-')} or --max is required")
    return SearchConfig(
        **bounds,
        p_set=args.p,
        pipeline=args.pipeline if args.pipeline is not None else DEFAULT_PIPELINE,
        coprime_only=args.coprime_only,
        canonical_xy=not args.all_orders,
        modular_moduli=args.moduli if args.moduli is not None else DEFAULT_MODULI,
        worker_count=args.workers,
        z_above_y=args.z_above_y,
        generalized=args.generalized,
        allow_external=args.allow_external,
    )


def config_to_argv(cfg: SearchConfig) -> list[str]:
    """Flags that rebuild ``cfg`` through ``search``'s parser."""
    argv = [
        "--x-max", str(cfg.x_max),
        "--y-max", str(cfg.y_max),
        "--z-max", str(cfg.z_max),
        "--p", ",".join(map(str, cfg.p_set)),
        "--pipeline", ",".join(f.value for f in cfg.pipeline),
        "--moduli", ",".join(map(str, cfg.modular_moduli)),
        "--workers", str(cfg.worker_count),
    ]
    for flag, on in (
        ("--coprime-only", cfg.coprime_only),
        ("--all-orders", not cfg.canonical_xy),
        ("--z-above-y", cfg.z_above_y),
        ("--generalized", cfg.generalized),
        ("--allow-external", cfg.allow_external),
    ):
        if on:
            argv.append(flag)
    return argv


def cmd_check(args: argparse.Namespace) -> int:
    x, y, z, p = args.x, args.y, args.z, args.p
    if not is_odd_prime(p) and not args.generalized:
        raise ConfigError(f"exponent {p} is not an odd prime (use --generalized)")
    cand = Candidate(x, y, z, p, generalized=args.generalized)
    verdict = None
    if cand.in_domain:
        verdict = evaluate(
            cand,
            validate_pipeline(args.pipeline or THEOREM_PIPELINE, args.allow_external),
            validate_moduli(args.moduli or DEFAULT_MODULI),
            args.allow_external,
        )
    solution = None if verdict is not None and verdict.refuted else oracle_check(cand)

    if args.json_lines:
        record = {
            "candidate": cand.as_dict(),
            "verdict": "refuted" if verdict is not None and verdict.refuted else "inconclusive",
            "filters_applied": verdict is not None,
            "certificate": json.loads(certificate_line(verdict.certificate))
            if verdict is not None and verdict.refuted else None,
            "oracle_solution": solution,
        }
        print(json.dumps(record, separators=(",", ":")))
    elif verdict is not None and verdict.refuted:
        print(verdict)
    else:
        head = "Inconclusive by filters" if verdict is not None else (
            f"Filters skipped (p={p} is not an odd prime)"
        )
        print(f"{head}; oracle: {'SOLUTION' if solution else 'not a solution'}")
    return EXIT_SOLUTION if solution else EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    try:
        report = run_search(cfg, certificates=args.certificates, verify=not args.no_verify)
    except SearchAborted as exc:
        print(f"search aborted: {exc}", file=sys.stderr)
        if args.report is not None:
            write_report(exc.partial_report, args.report)
        return EXIT_INTERNAL
    if args.report is not None:
        write_report(report, args.report)
        write_table(report, args.table or args.report.with_suffix(".csv"))
    elif args.table is not None:
        write_table(report, args.table)

    print(f"candidates: {report.total_candidates}")
    for fid, n in report.refuted_by_filter.items():
        print(f"  {fid:<14}{n:>12}")
    print(f"survivors to oracle: {report.survivors_to_oracle}")
    print(f"oracle solutions: {report.oracle_solutions_found}")
    if report.certificate_mismatches is not None:
        print(f"certificate mismatches: {report.certificate_mismatches}")
    print(f"wall time: {report.wall_time:.3f}s with {cfg.worker_count} worker(s)")
    print("config: " + " ".join(config_to_argv(cfg)))
    if report.certificate_mismatches:
        return EXIT_INTERNAL
    if report.oracle_solutions_found:
        return EXIT_SOLUTION
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace | None = None) -> int:
    results = selftest.run_all()
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name}: {r.passed} passed, {r.failed} failed")
        for f in r.failures:
            print(f"    {f}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_INTERNAL


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    print(format_table(run_bench(cfg)))
    return EXIT_OK


_COMMANDS = {"check": cmd_check, "search": cmd_search, "selftest": cmd_selftest, "bench": cmd_bench}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except (UsageError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
