"""Command-line entry point.

Subcommands: run, timing, postprocess, validate-log. Exit codes: 0 success,
2 usage error, 1 runtime error. The default output directory comes from
--out, then the BLACKBENCH_OUT environment variable, then ./blackbench-out.
"""

from __future__ import annotations

import argparse
import datetime
import os
import shlex
import sys

from . import __version__
from .algorithms import BUILTIN_ALGORITHMS, builtin_factory
from .environment import environment_info
from .observer import read_log, validate_log, write_log
from .postprocess import compute_ecdf, compute_ert, emit_report
from .protocol import ExternalAlgorithm
from .runner import BudgetPolicy, run_suite
from .suite import load_layout
from .timing import format_table, time_suite, write_timing_reports


def _parse_dims(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _output_dir(args) -> str:
    out = args.out or os.environ.get("BLACKBENCH_OUT") or "blackbench-out"
    os.makedirs(out, exist_ok=True)
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blackbench",
        description="Budget-free black-box optimization benchmarking harness",
    )
    parser.add_argument("--version", action="version", version=f"blackbench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment over a suite")
    run.add_argument("--suite", default="mini-bbob", help="builtin suite name or definition file")
    run.add_argument("--algorithm", default="random-search",
                     help=f"builtin algorithm ({', '.join(sorted(BUILTIN_ALGORITHMS))})")
    run.add_argument("--algorithm-cmd", default=None, metavar="CMD",
                     help="external optimizer command speaking the wire protocol; "
                          "{seed} is replaced with the per-problem seed")
    run.add_argument("--budget", default="3,10,30,100,300",
                     help="budget multiplier k, or comma schedule of ks (budget is k x n)")
    run.add_argument("--seed", type=int, default=1, help="suite instance seed")
    run.add_argument("--algorithm-seed", type=int, default=1)
    run.add_argument("--dims", type=_parse_dims, default=None,
                     help="restrict to these dimensions, e.g. 2,3,5")
    run.add_argument("--threads", type=int, default=1)
    run.add_argument("--debug-trace", action="store_true",
                     help="record every evaluation (large files; for replay checks)")
    run.add_argument("--notes", default="", help="free-text tuning notes for the log header")
    run.add_argument("--stamp", action="store_true",
                     help="add a timestamp to the log header (breaks byte-identical reruns)")
    run.add_argument("--out", default=None)

    timing = sub.add_parser("timing", help="time-complexity experiment")
    timing.add_argument("--suite", default="mini-bbob")
    timing.add_argument("--dims", type=_parse_dims, default=None,
                        help="dimensions to time (default: all in the suite)")
    timing.add_argument("--algorithm", default="random-search")
    timing.add_argument("--min-seconds", type=float, default=1.0)
    timing.add_argument("--baseline", action="store_true",
                        help="additionally time pure random search as a baseline")
    timing.add_argument("--legacy-f8", action="store_true",
                        help="time only each dimension's first Rosenbrock instance")
    timing.add_argument("--seed", type=int, default=1)
    timing.add_argument("--algorithm-seed", type=int, default=1)
    timing.add_argument("--threads", type=int, default=1, help="ignored: timing is sequential")
    timing.add_argument("--out", default=None)

    post = sub.add_parser("postprocess", help="ECDF/ERT tables from experiment logs")
    post.add_argument("logs", nargs="+", help="experiment log files")
    post.add_argument("--no-normalize", action="store_true",
                      help="plot x as raw evaluations instead of evaluations/dimension")
    post.add_argument("--targets", default=None,
                      help="comma-separated target precisions (default: the standard grid)")
    post.add_argument("--out", default=None)

    validate = sub.add_parser("validate-log", help="check a log file's structure")
    validate.add_argument("log", help="experiment log file")
    return parser


def _reproduction_command(args, policy: BudgetPolicy) -> str:
    # everything that affects the produced bytes; output location and thread
    # count are deliberately omitted so reruns stay byte-identical
    parts = ["blackbench", "run", "--suite", args.suite]
    if args.algorithm_cmd:
        parts += ["--algorithm-cmd", shlex.quote(args.algorithm_cmd)]
    else:
        parts += ["--algorithm", args.algorithm]
    budget = ",".join(str(k) for k in policy.multipliers())
    parts += ["--budget", budget, "--seed", str(args.seed),
              "--algorithm-seed", str(args.algorithm_seed)]
    if args.dims:
        parts += ["--dims", ",".join(str(d) for d in args.dims)]
    if args.debug_trace:
        parts.append("--debug-trace")
    if args.notes:
        parts += ["--notes", shlex.quote(args.notes)]
    if args.stamp:
        parts.append("--stamp")
    return " ".join(parts)


def _run_meta(args, layout, algorithm_name: str, multiplier: int, policy: BudgetPolicy) -> dict:
    meta = {
        "suite": layout.name,
        "layout_dimensions": list(layout.dimensions),
        "layout_function_ids": list(layout.function_ids),
        "layout_instances": list(layout.instances),
        "algorithm": algorithm_name,
        "base_seed": args.seed,
        "algorithm_seed": args.algorithm_seed,
        "budget_multiplier": multiplier,
        "budget_mode": policy.mode,
        "debug_trace": args.debug_trace,
        "notes": args.notes,
        "command": _reproduction_command(args, policy),
        "environment": environment_info(),
        "version": __version__,
    }
    if args.stamp:
        meta["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return meta


def _cmd_run(args) -> int:
    layout = load_layout(args.suite)
    policy = BudgetPolicy.parse(args.budget)
    out = _output_dir(args)
    multipliers = policy.multipliers()
    for multiplier in multipliers:
        if args.algorithm_cmd:
            algorithm = ExternalAlgorithm(args.algorithm_cmd, seed=args.algorithm_seed)
        else:
            algorithm = builtin_factory(args.algorithm, seed=args.algorithm_seed)
        meta = _run_meta(args, layout, algorithm.name, multiplier, policy)
        log = run_suite(
            layout, algorithm, multiplier, base_seed=args.seed, meta=meta,
            threads=args.threads, debug_trace=args.debug_trace, dimensions=args.dims,
        )
        name = "experiment.log" if len(multipliers) == 1 else f"experiment_k{multiplier}.log"
        path = os.path.join(out, name)
        write_log(log, path)
        solved = sum(1 for b in log.blocks if b.final_target_hit)
        print(f"k={multiplier}: {len(log.blocks)} problems, "
              f"{solved} final-target hits -> {path}")
    return 0


def _cmd_timing(args) -> int:
    if args.threads > 1:
        print("timing runs strictly single-threaded; --threads ignored", file=sys.stderr)
    layout = load_layout(args.suite)
    dims = args.dims or layout.dimensions
    out = _output_dir(args)
    factory = builtin_factory(args.algorithm, seed=args.algorithm_seed)
    main_is_baseline = args.baseline and args.algorithm == "random-search"
    reports = [time_suite(
        layout, tuple(dims), factory,
        min_seconds=args.min_seconds, base_seed=args.seed,
        legacy_f8=args.legacy_f8, baseline=main_is_baseline,
    )]
    if args.baseline and not main_is_baseline:
        reports.append(time_suite(
            layout, tuple(dims), builtin_factory("random-search", seed=args.algorithm_seed),
            min_seconds=args.min_seconds, base_seed=args.seed,
            legacy_f8=args.legacy_f8, baseline=True,
        ))
    path = os.path.join(out, "timing.log")
    write_timing_reports(reports, path)
    for report in reports:
        print(format_table(report))
    print(f"report -> {path}")
    return 0


def _cmd_postprocess(args) -> int:
    logs = [read_log(path) for path in args.logs]
    targets = None
    if args.targets:
        targets = [float(part) for part in args.targets.split(",") if part.strip()]
    curves = compute_ecdf(logs, targets, normalize_by_dimension=not args.no_normalize)
    entries = compute_ert(logs, targets)
    out = _output_dir(args)
    written = emit_report(curves, entries, out, logs=logs)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_validate(args) -> int:
    log = read_log(args.log)
    problems = validate_log(log)
    if problems:
        for line in problems:
            print(f"invalid: {line}", file=sys.stderr)
        return 1
    print(f"{args.log}: ok ({len(log.blocks)} problem blocks)")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "timing": _cmd_timing,
        "postprocess": _cmd_postprocess,
        "validate-log": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
