"""Assessment of experiment logs: runtime ECDFs, ERT tables, CSV reports.

Aggregation is uniform over (run, target) pairs: each problem block in each
log is one run, and every requested target forms one pair with it. Pairs
whose target was never hit contribute only to the denominator. Requested
targets must be precisions that were tracked when the log was recorded
(the standard grid by default); matching is by exact float equality.
"""

from __future__ import annotations

import csv
import os
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .observer import ExperimentLog, ProblemBlock
from .problem import default_targets


@dataclass(frozen=True)
class EcdfCurve:
    """Fraction of (run, target) pairs solved within x evaluations."""

    algorithm: str
    dimension: int
    normalized: bool  # x divided by dimension
    x: tuple[float, ...]
    y: tuple[float, ...]
    total_pairs: int
    solved_pairs: int

    @property
    def final_fraction(self) -> float:
        return self.y[-1] if self.y else 0.0


@dataclass(frozen=True)
class ErtEntry:
    """Expected running time for one (function, dimension, target)."""

    algorithm: str
    function_id: int
    dimension: int
    target: float
    ert: float  # inf when success_count == 0
    success_count: int
    run_count: int


def _algorithm_of(log: ExperimentLog) -> str:
    return str(log.meta.get("algorithm", "unknown"))


def _first_hit(block: ProblemBlock, target: float) -> Optional[int]:
    for record in block.records:
        if record.target_precision == target:
            return record.evaluations
    return None


def compute_ecdf(
    logs: Sequence[ExperimentLog],
    targets: Optional[Sequence[float]] = None,
    normalize_by_dimension: bool = True,
) -> list[EcdfCurve]:
    """One curve per (algorithm, dimension), sorted by that key."""
    if not logs:
        raise ValueError("no logs given")
    if targets is None:
        targets = default_targets()
    runtimes: dict[tuple[str, int], list[Optional[float]]] = defaultdict(list)
    for log in logs:
        algorithm = _algorithm_of(log)
        for block in log.blocks:
            key = (algorithm, block.dimension)
            for target in targets:
                evaluations = _first_hit(block, target)
                if evaluations is None:
                    runtimes[key].append(None)
                elif normalize_by_dimension:
                    runtimes[key].append(evaluations / block.dimension)
                else:
                    runtimes[key].append(evaluations)
    curves = []
    for (algorithm, dimension), pairs in sorted(runtimes.items()):
        solved = sorted(r for r in pairs if r is not None)
        total = len(pairs)
        xs: list[float] = []
        ys: list[float] = []
        seen = 0
        for runtime in solved:
            seen += 1
            if xs and xs[-1] == runtime:
                ys[-1] = seen / total  # ties: one step of combined height
            else:
                xs.append(runtime)
                ys.append(seen / total)
        curves.append(EcdfCurve(
            algorithm=algorithm,
            dimension=dimension,
            normalized=normalize_by_dimension,
            x=tuple(xs),
            y=tuple(ys),
            total_pairs=total,
            solved_pairs=len(solved),
        ))
    return curves


def compute_ert(
    logs: Sequence[ExperimentLog],
    targets: Optional[Sequence[float]] = None,
) -> list[ErtEntry]:
    """ERT per (algorithm, function, dimension, target).

    Every run contributes the evaluations it actually spent: runs that hit
    the target contribute their first-hit evaluation count, exhausted runs
    their total count; the sum is divided by the number of successes.
    """
    if not logs:
        raise ValueError("no logs given")
    if targets is None:
        targets = default_targets()
    groups: dict[tuple[str, int, int], list[ProblemBlock]] = defaultdict(list)
    for log in logs:
        algorithm = _algorithm_of(log)
        for block in log.blocks:
            groups[(algorithm, block.function_id, block.dimension)].append(block)
    entries = []
    for (algorithm, function_id, dimension), blocks in sorted(groups.items()):
        for target in targets:
            spent = 0
            successes = 0
            for block in blocks:
                evaluations = _first_hit(block, target)
                if evaluations is None:
                    spent += block.total_evaluations
                else:
                    spent += evaluations
                    successes += 1
            entries.append(ErtEntry(
                algorithm=algorithm,
                function_id=function_id,
                dimension=dimension,
                target=target,
                ert=spent / successes if successes else float("inf"),
                success_count=successes,
                run_count=len(blocks),
            ))
    return entries


def budget_annotations(logs: Sequence[ExperimentLog]) -> tuple[dict[str, int], bool]:
    """Minimal budget multiplier per algorithm, plus a differs-flag.

    Algorithms are only comparable up to the smallest budget given to any of
    them; the report warns when the minima differ.
    """
    minima: dict[str, int] = {}
    for log in logs:
        algorithm = _algorithm_of(log)
        k = int(log.meta.get("budget_multiplier", 0))
        if algorithm not in minima or k < minima[algorithm]:
            minima[algorithm] = k
    differ = len(set(minima.values())) > 1
    return minima, differ


def emit_report(
    curves: Sequence[EcdfCurve],
    entries: Sequence[ErtEntry],
    output_dir: str,
    logs: Sequence[ExperimentLog] = (),
) -> list[str]:
    """Write ecdf_dim<N>.csv per dimension, ert.csv, and summary.txt.

    Output is deterministic: fixed ordering, shortest round-trip decimals.
    Returns the paths written.
    """
    os.makedirs(output_dir, exist_ok=True)
    written = []
    by_dimension: dict[int, list[EcdfCurve]] = defaultdict(list)
    for curve in curves:
        by_dimension[curve.dimension].append(curve)
    for dimension in sorted(by_dimension):
        path = os.path.join(output_dir, f"ecdf_dim{dimension}.csv")
        _write_csv(
            path,
            ["algorithm", "x", "solved_fraction"],
            [
                [c.algorithm, x, y]
                for c in sorted(by_dimension[dimension], key=lambda c: c.algorithm)
                for x, y in zip(c.x, c.y)
            ],
        )
        written.append(path)
    ert_path = os.path.join(output_dir, "ert.csv")
    _write_csv(
        ert_path,
        ["algorithm", "function", "dimension", "target", "ert", "success_count", "run_count"],
        [
            [e.algorithm, e.function_id, e.dimension, e.target, e.ert,
             e.success_count, e.run_count]
            for e in entries
        ],
    )
    written.append(ert_path)
    summary_path = os.path.join(output_dir, "summary.txt")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("post-processing summary\n")
        if logs:
            minima, differ = budget_annotations(logs)
            for algorithm in sorted(minima):
                fh.write(f"algorithm {algorithm}: minimal budget multiplier k={minima[algorithm]}\n")
            if differ:
                fh.write(
                    "warning: budgets differ; algorithms are comparable only up to "
                    "the smallest budget\n"
                )
        for curve in curves:
            fh.write(
                f"dim {curve.dimension} {curve.algorithm}: solved "
                f"{curve.solved_pairs}/{curve.total_pairs} pairs, "
                f"final fraction {curve.final_fraction!r}\n"
            )
    written.append(summary_path)
    return written


def _write_csv(path: str, header: list[str], rows: Iterable[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
