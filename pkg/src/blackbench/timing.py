"""Time-complexity experiment: wall-clock seconds per evaluation, per dimension.

Measurement is strictly sequential; the API exposes no parallelism on
purpose. Each dimension is timed by running the algorithm over all of its
implemented problems, repeating whole passes until the cumulative measured
time reaches a floor that keeps timer resolution noise irrelevant.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .algorithms import AlgorithmFactory
from .environment import environment_info
from .observer import LogParseError, _parse_line
from .rng import derive_seed
from .runner import run_problem
from .suite import SuiteLayout, build_problem

DEFAULT_MIN_SECONDS = 1.0
# evaluations granted per problem and pass: multiplier x dimension
DEFAULT_PASS_MULTIPLIER = 100


@dataclass(frozen=True)
class TimingEntry:
    dimension: int
    total_evaluations: int
    total_seconds: float

    @property
    def seconds_per_evaluation(self) -> float:
        return self.total_seconds / self.total_evaluations


@dataclass
class TimingReport:
    """Per-dimension timing entries for one algorithm plus environment data."""

    algorithm: str
    baseline: bool
    entries: list[TimingEntry] = field(default_factory=list)
    environment: dict = field(default_factory=environment_info)


def _require_monotonic_clock() -> None:
    if not time.get_clock_info("perf_counter").monotonic:
        raise RuntimeError("monotonic clock unavailable; timing would be meaningless")


def time_dimension(
    layout: SuiteLayout,
    dimension: int,
    factory: AlgorithmFactory,
    min_seconds: float = DEFAULT_MIN_SECONDS,
    base_seed: int = 1,
    pass_multiplier: int = DEFAULT_PASS_MULTIPLIER,
    legacy_f8: bool = False,
) -> TimingEntry:
    """Time one dimension until min_seconds of cumulative run time.

    With legacy_f8, only the dimension's first Rosenbrock instance is timed
    instead of all implemented problems.
    """
    _require_monotonic_clock()
    if dimension not in layout.dimensions:
        raise ValueError(f"dimension {dimension} not in layout {layout.name}")
    if legacy_f8:
        d_rank = layout.dimensions.index(dimension)
        indices = [layout.suite_index(d_rank, 8, 0)]
    else:
        indices = layout.implemented_indices((dimension,))
    total_evaluations = 0
    total_seconds = 0.0
    pass_index = 0
    while total_seconds < min_seconds:
        for index in indices:
            problem = build_problem(layout, index, base_seed)
            problem_seed = derive_seed(factory.seed, index, pass_index)
            budget = pass_multiplier * dimension
            t0 = time.perf_counter()
            summary = run_problem(problem, factory, budget, problem_seed=problem_seed)
            total_seconds += time.perf_counter() - t0
            total_evaluations += summary.evaluations
        pass_index += 1
    return TimingEntry(dimension, total_evaluations, total_seconds)


def time_suite(
    layout: SuiteLayout,
    dimensions: tuple[int, ...],
    factory: AlgorithmFactory,
    min_seconds: float = DEFAULT_MIN_SECONDS,
    base_seed: int = 1,
    legacy_f8: bool = False,
    baseline: bool = False,
) -> TimingReport:
    report = TimingReport(algorithm=factory.name, baseline=baseline)
    for dimension in sorted(dimensions):
        report.entries.append(
            time_dimension(
                layout, dimension, factory,
                min_seconds=min_seconds, base_seed=base_seed, legacy_f8=legacy_f8,
            )
        )
    return report


def write_timing_reports(reports: list[TimingReport], path: str) -> None:
    """Same line-record format as experiment logs: meta line, then entries."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        meta = {"kind": "meta", "report": "timing"}
        meta["environment"] = reports[0].environment if reports else environment_info()
        fh.write(json.dumps(meta, separators=(", ", ": ")) + "\n")
        for report in reports:
            for entry in report.entries:
                fh.write(json.dumps({
                    "kind": "timing",
                    "algorithm": report.algorithm,
                    "baseline": report.baseline,
                    "dimension": entry.dimension,
                    "total_evaluations": entry.total_evaluations,
                    "total_seconds": entry.total_seconds,
                    "seconds_per_evaluation": entry.seconds_per_evaluation,
                }, separators=(", ", ": ")) + "\n")


def read_timing_reports(path: str) -> list[TimingReport]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines:
        raise LogParseError(path, 1, "empty file")
    meta = _parse_line(path, 1, lines[0])
    if meta.get("kind") != "meta" or meta.get("report") != "timing":
        raise LogParseError(path, 1, "not a timing report")
    reports: dict[tuple[str, bool], TimingReport] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        record = _parse_line(path, lineno, line)
        if record.get("kind") != "timing":
            raise LogParseError(path, lineno, "expected a timing record")
        key = (record["algorithm"], record["baseline"])
        report = reports.setdefault(
            key,
            TimingReport(
                algorithm=record["algorithm"],
                baseline=record["baseline"],
                environment=meta["environment"],
            ),
        )
        report.entries.append(TimingEntry(
            record["dimension"], record["total_evaluations"], record["total_seconds"],
        ))
    return list(reports.values())


def format_table(report: TimingReport) -> str:
    """Human-readable per-dimension table."""
    label = f"{report.algorithm}{' (baseline)' if report.baseline else ''}"
    rows = [f"timing: {label}", f"{'dim':>5}  {'evaluations':>12}  {'seconds':>12}  {'sec/eval':>12}"]
    for e in report.entries:
        rows.append(
            f"{e.dimension:>5}  {e.total_evaluations:>12}  "
            f"{e.total_seconds:>12.6f}  {e.seconds_per_evaluation:>12.3e}"
        )
    return "\n".join(rows)
