"""The experimental procedure: one run per problem, independent restarts,
k x n budgets, conclusive termination on final-target hits.

The runner owns the evaluation loop: algorithms only ever propose points, so
the budget cannot be exceeded. A start that raises is recorded as aborted;
a start that ends without proposing anything is treated as permanent
self-termination and stops the restart loop.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from threading import Lock
from typing import Optional, Sequence

from .algorithms import AlgorithmFactory
from .observer import ExperimentLog, Observer
from .problem import Problem
from .rng import derive_seed
from .suite import SuiteLayout, build_problem

logger = logging.getLogger(__name__)

DEFAULT_SCHEDULE = (3, 10, 30, 100, 300)


@dataclass(frozen=True)
class BudgetPolicy:
    """Evaluation budget proportional to dimension: k x n per problem."""

    multiplier: int = 3
    schedule: tuple[int, ...] = DEFAULT_SCHEDULE
    mode: str = "single"  # "single" runs one k; "schedule" one experiment per k

    def __post_init__(self):
        if self.multiplier < 1:
            raise ValueError("budget multiplier must be positive")
        if self.mode not in ("single", "schedule"):
            raise ValueError(f"unknown budget mode {self.mode!r}")
        if any(a >= b for a, b in zip(self.schedule, self.schedule[1:])):
            raise ValueError("schedule must be strictly ascending")

    def budget(self, dimension: int) -> int:
        return self.multiplier * dimension

    def multipliers(self) -> tuple[int, ...]:
        return (self.multiplier,) if self.mode == "single" else self.schedule

    @classmethod
    def parse(cls, text: str) -> "BudgetPolicy":
        """Parse a CLI budget: a single k, or a comma schedule of ks."""
        parts = [int(p) for p in text.split(",") if p.strip()]
        if not parts:
            raise ValueError("empty budget")
        if len(parts) == 1:
            return cls(multiplier=parts[0])
        return cls(multiplier=parts[0], schedule=tuple(parts), mode="schedule")


@dataclass(frozen=True)
class RunSummary:
    """Outcome of one problem's budgeted run."""

    suite_index: int
    budget: int
    evaluations: int
    best_f: float
    final_target_hit: bool
    restarts: int
    aborted: bool


def run_problem(
    problem: Problem,
    factory: AlgorithmFactory,
    budget: int,
    problem_seed: Optional[int] = None,
) -> RunSummary:
    """Run independent restarts of the algorithm on one fresh problem.

    Stops when the budget is exhausted (mid-restart if need be) or the final
    target is hit. The evaluation counter accumulates across restarts.
    """
    if problem.evaluations:
        raise ValueError("run_problem requires a fresh problem")
    if problem_seed is None:
        problem_seed = derive_seed(factory.seed, problem.descriptor.suite_index)
    restarts = 0
    aborted = False
    while problem.evaluations < budget and not problem.final_target_hit():
        view = problem.algorithm_view(budget_hint=budget - problem.evaluations)
        run_seed = derive_seed(problem_seed, restarts)
        before = problem.evaluations
        try:
            proposals = factory.make(view, run_seed, restarts)
            outcome = _drive_start(problem, proposals, budget)
        except Exception:
            logger.warning(
                "problem %d: algorithm %r failed in restart %d; run aborted",
                problem.descriptor.suite_index, factory.name, restarts,
                exc_info=True,
            )
            aborted = True
            restarts += 1
            break
        restarts += 1
        if outcome == "self_terminated" and problem.evaluations == before:
            # a start that proposes nothing would restart forever
            break
    return RunSummary(
        suite_index=problem.descriptor.suite_index,
        budget=budget,
        evaluations=problem.evaluations,
        best_f=problem.best_f,
        final_target_hit=problem.final_target_hit(),
        restarts=restarts,
        aborted=aborted,
    )


def _drive_start(problem: Problem, proposals, budget: int) -> str:
    """Evaluate one start's proposals until it returns or the run must stop."""
    try:
        x = next(proposals)
        while True:
            if problem.evaluations >= budget or problem.final_target_hit():
                proposals.close()
                return "stopped"
            f = problem.evaluate(x)
            x = proposals.send(f)
    except StopIteration:
        return "self_terminated"


def run_suite(
    layout: SuiteLayout,
    factory: AlgorithmFactory,
    multiplier: int,
    base_seed: int,
    meta: Optional[dict] = None,
    threads: int = 1,
    debug_trace: bool = False,
    dimensions: Optional[Sequence[int]] = None,
) -> ExperimentLog:
    """Run every implemented problem of the layout exactly once.

    The output is independent of thread count and scheduling: every problem's
    run is a pure function of (layout, index, base_seed, factory.seed), and
    blocks are merged in suite-index order.
    """
    observer = Observer(meta=meta, debug_trace=debug_trace)
    dims = tuple(dimensions) if dimensions is not None else None
    indices = layout.implemented_indices(dims)
    if not indices:
        raise ValueError("no implemented problems selected")
    attach_lock = Lock()

    external_run = getattr(factory, "run_problem", None)

    def work(index: int) -> None:
        try:
            problem = build_problem(layout, index, base_seed)
            with attach_lock:
                observer.observe(problem)
            budget = multiplier * problem.dimension
            if external_run is not None:
                summary = external_run(problem, budget)
            else:
                summary = run_problem(problem, factory, budget)
            observer.finish_problem(
                problem, restarts=summary.restarts, aborted=summary.aborted
            )
        except Exception as exc:
            raise RuntimeError(f"problem {index}: {exc}") from exc

    if threads <= 1:
        for index in indices:
            work(index)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for _ in pool.map(work, indices):
                pass
    return observer.build_log()
