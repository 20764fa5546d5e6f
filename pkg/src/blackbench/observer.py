"""First-hit runtime recording and the experiment log file format.

The log is line-delimited JSON with a `kind` field per record and fixed key
order, so identical experiments produce byte-identical files. Kinds:

  meta         first line, exactly once: experiment metadata
  problem      opens a block: identity of the problem being reported
  hit          first time a target precision was reached
  trace        one (evaluation, f) pair per evaluation (debug mode only)
  problem_end  closes a block: totals for the problem

Blocks are buffered per problem and merged in suite-index order at write
time, so parallel execution cannot perturb the output bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .problem import Problem

FORMAT_VERSION = 1


class LogParseError(ValueError):
    """Malformed log file; message names the offending line."""

    def __init__(self, path: str, lineno: int, reason: str):
        super().__init__(f"{path}:{lineno}: {reason}")
        self.path = path
        self.lineno = lineno
        self.reason = reason


@dataclass(frozen=True)
class RuntimeRecord:
    """First hit of one target precision on one problem."""

    suite_index: int
    target_precision: float
    evaluations: int
    f_observed: float


@dataclass
class ProblemBlock:
    """Everything recorded about one problem run."""

    suite_index: int
    function_id: int
    instance_id: int
    dimension: int
    f_opt: float
    records: list[RuntimeRecord] = field(default_factory=list)
    trace: list[tuple[int, float]] = field(default_factory=list)
    total_evaluations: int = 0
    best_f: float = float("inf")
    final_target_hit: bool = False
    restarts: int = 0
    aborted: bool = False
    closed: bool = False


@dataclass
class ExperimentLog:
    """One meta header plus problem blocks ordered by suite index."""

    meta: dict
    blocks: list[ProblemBlock] = field(default_factory=list)


class Observer:
    """Collects runtime records from attached problems.

    One observer serves one experiment; each problem is attached once and the
    observer receives its hits and (in debug mode) its full evaluation trace.
    """

    def __init__(self, meta: Optional[dict] = None, debug_trace: bool = False):
        self.meta = dict(meta or {})
        self.debug_trace = debug_trace
        self._blocks: dict[int, ProblemBlock] = {}

    def observe(self, problem: Problem) -> Problem:
        if problem._observer is not None:
            raise ValueError("problem is already attached to an observer")
        d = problem.descriptor
        if d.suite_index in self._blocks:
            raise ValueError(f"suite index {d.suite_index} already observed")
        self._blocks[d.suite_index] = ProblemBlock(
            suite_index=d.suite_index,
            function_id=d.function_id,
            instance_id=d.instance_id,
            dimension=d.dimension,
            f_opt=d.f_opt,
        )
        problem._observer = self
        return problem

    def _record_hit(self, problem: Problem, precision: float, evaluations: int, f: float):
        self._blocks[problem.descriptor.suite_index].records.append(
            RuntimeRecord(problem.descriptor.suite_index, precision, evaluations, f)
        )

    def _record_evaluation(self, problem: Problem, evaluations: int, f: float):
        if self.debug_trace:
            self._blocks[problem.descriptor.suite_index].trace.append((evaluations, f))

    def finish_problem(self, problem: Problem, restarts: int = 0, aborted: bool = False):
        """Close the problem's block with its end-of-run summary."""
        block = self._blocks[problem.descriptor.suite_index]
        if block.closed:
            raise ValueError(f"suite index {block.suite_index} already finished")
        block.total_evaluations = problem.evaluations
        block.best_f = problem.best_f
        block.final_target_hit = problem.final_target_hit()
        block.restarts = restarts
        block.aborted = aborted
        block.closed = True

    def build_log(self) -> ExperimentLog:
        blocks = [self._blocks[i] for i in sorted(self._blocks)]
        return ExperimentLog(meta=dict(self.meta), blocks=blocks)


def _dump(record: dict) -> str:
    return json.dumps(record, separators=(", ", ": "))


def write_log(log: ExperimentLog, path: str) -> None:
    """Serialize; identical logs yield byte-identical files."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        meta = {"kind": "meta", "format_version": FORMAT_VERSION}
        meta.update(log.meta)
        fh.write(_dump(meta) + "\n")
        for block in log.blocks:
            fh.write(_dump({
                "kind": "problem",
                "index": block.suite_index,
                "function": block.function_id,
                "instance": block.instance_id,
                "dimension": block.dimension,
                "f_opt": block.f_opt,
            }) + "\n")
            for rec in block.records:
                fh.write(_dump({
                    "kind": "hit",
                    "index": rec.suite_index,
                    "target": rec.target_precision,
                    "evaluations": rec.evaluations,
                    "f": rec.f_observed,
                }) + "\n")
            for evaluations, f in block.trace:
                fh.write(_dump({
                    "kind": "trace",
                    "index": block.suite_index,
                    "evaluations": evaluations,
                    "f": f,
                }) + "\n")
            fh.write(_dump({
                "kind": "problem_end",
                "index": block.suite_index,
                "evaluations": block.total_evaluations,
                "best_f": block.best_f,
                "final_target_hit": block.final_target_hit,
                "restarts": block.restarts,
                "aborted": block.aborted,
            }) + "\n")


def _parse_line(path: str, lineno: int, line: str) -> dict:
    text = line.strip()
    if not text:
        raise LogParseError(path, lineno, "blank line")
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LogParseError(path, lineno, f"invalid record: {exc.msg}") from None
    if not isinstance(record, dict) or "kind" not in record:
        raise LogParseError(path, lineno, "record must be an object with a 'kind'")
    return record


def read_log(path: str) -> ExperimentLog:
    """Parse a log file back into the in-memory model; read(write(x)) == x."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines:
        raise LogParseError(path, 1, "empty file")
    first = _parse_line(path, 1, lines[0])
    if first["kind"] != "meta":
        raise LogParseError(path, 1, "first record must be 'meta'")
    meta = {k: v for k, v in first.items() if k not in ("kind", "format_version")}
    log = ExperimentLog(meta=meta)
    open_block: Optional[ProblemBlock] = None
    for lineno, line in enumerate(lines[1:], start=2):
        record = _parse_line(path, lineno, line)
        kind = record["kind"]
        try:
            if kind == "meta":
                raise LogParseError(path, lineno, "duplicate meta record")
            elif kind == "problem":
                if open_block is not None:
                    raise LogParseError(path, lineno, "previous block not closed")
                open_block = ProblemBlock(
                    suite_index=record["index"],
                    function_id=record["function"],
                    instance_id=record["instance"],
                    dimension=record["dimension"],
                    f_opt=record["f_opt"],
                )
            elif kind == "hit":
                if open_block is None or record["index"] != open_block.suite_index:
                    raise LogParseError(path, lineno, "hit outside its problem block")
                open_block.records.append(RuntimeRecord(
                    record["index"], record["target"],
                    record["evaluations"], record["f"],
                ))
            elif kind == "trace":
                if open_block is None or record["index"] != open_block.suite_index:
                    raise LogParseError(path, lineno, "trace outside its problem block")
                open_block.trace.append((record["evaluations"], record["f"]))
            elif kind == "problem_end":
                if open_block is None or record["index"] != open_block.suite_index:
                    raise LogParseError(path, lineno, "problem_end without matching problem")
                open_block.total_evaluations = record["evaluations"]
                open_block.best_f = record["best_f"]
                open_block.final_target_hit = record["final_target_hit"]
                open_block.restarts = record["restarts"]
                open_block.aborted = record["aborted"]
                open_block.closed = True
                log.blocks.append(open_block)
                open_block = None
            else:
                raise LogParseError(path, lineno, f"unknown record kind {kind!r}")
        except KeyError as exc:
            raise LogParseError(path, lineno, f"missing field {exc.args[0]!r}") from None
    if open_block is not None:
        raise LogParseError(path, len(lines), "file ends inside a problem block")
    return log


def validate_log(log: ExperimentLog) -> list[str]:
    """Structural invariant checks; returns a list of violations (empty = ok)."""
    problems: list[str] = []
    last_index = -1
    for block in log.blocks:
        where = f"block {block.suite_index}"
        if block.suite_index <= last_index:
            problems.append(f"{where}: blocks not in ascending suite-index order")
        last_index = block.suite_index
        precisions = [r.target_precision for r in block.records]
        evals = [r.evaluations for r in block.records]
        if any(a <= b for a, b in zip(precisions, precisions[1:])):
            problems.append(f"{where}: hit precisions not strictly decreasing")
        if any(a > b for a, b in zip(evals, evals[1:])):
            problems.append(f"{where}: hit evaluations decreasing")
        if any(e < 1 or e > block.total_evaluations for e in evals):
            problems.append(f"{where}: hit evaluations outside [1, total]")
        if block.total_evaluations < 0:
            problems.append(f"{where}: negative evaluation count")
        if not block.closed:
            problems.append(f"{where}: block not closed")
    return problems


def replay_hits(block: ProblemBlock, targets: Iterable[float]) -> list[RuntimeRecord]:
    """Recompute hit records from a debug trace, independently of the live
    tracking path. Used by replay-equivalence tests."""
    pending = sorted(targets, reverse=True)
    out: list[RuntimeRecord] = []
    for evaluations, f in block.trace:
        while pending and f <= block.f_opt + pending[0]:
            out.append(RuntimeRecord(block.suite_index, pending.pop(0), evaluations, f))
    return out
