"""Evaluatable problem objects, evaluation counting, and target tracking.

A Problem is a mutable single-owner state machine: one run thread mutates it
at a time. The algorithm-facing metadata is the AlgorithmView, which by
construction carries no function/instance identity (the input firewall).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable, Optional, Sequence


class ContractViolationError(ValueError):
    """Caller bug: bad input to evaluate (wrong length or non-finite)."""


class UnsupportedOperationError(RuntimeError):
    """Operation not available on this problem (e.g. constraints of a
    constraint-free problem)."""


def default_targets() -> tuple[float, ...]:
    """The 51 target precisions 10^2 down to 10^-8, factor 10^-0.2 apart."""
    return tuple(10.0 ** ((10 - j) / 5.0) for j in range(51))


@dataclass(frozen=True)
class ProblemDescriptor:
    """The (dimension, function, instance) triple plus optimum and targets."""

    function_id: int
    instance_id: int
    dimension: int
    suite_index: int
    f_opt: float
    x_opt: tuple[float, ...]
    target_precisions: tuple[float, ...]

    def __post_init__(self):
        if self.function_id < 1 or self.instance_id < 1 or self.dimension < 1:
            raise ValueError("function_id, instance_id and dimension must be positive")
        if self.suite_index < 0:
            raise ValueError("suite_index must be non-negative")
        if len(self.x_opt) != self.dimension:
            raise ValueError("x_opt length must equal dimension")
        ts = self.target_precisions
        if not ts or any(t <= 0.0 for t in ts):
            raise ValueError("target precisions must be positive")
        if any(a <= b for a, b in zip(ts, ts[1:])):
            raise ValueError("target precisions must be strictly decreasing")

    @property
    def final_precision(self) -> float:
        return self.target_precisions[-1]


@dataclass(frozen=True)
class AlgorithmView:
    """Everything an optimizer is allowed to see about a problem.

    The field set is the interface contract: no identity information
    (function, instance, suite position, optimum) may ever be added here.
    """

    dimension: int
    num_objectives: int
    num_constraints: int
    lower_bounds: tuple[float, ...]
    upper_bounds: tuple[float, ...]
    initial_solution: tuple[float, ...]
    budget_hint: Optional[int] = None

    def to_dict(self) -> dict:
        """Serialized form with fixed key order; used on the wire as-is."""
        return {
            "dimension": self.dimension,
            "num_objectives": self.num_objectives,
            "num_constraints": self.num_constraints,
            "lower_bounds": list(self.lower_bounds),
            "upper_bounds": list(self.upper_bounds),
            "initial_solution": list(self.initial_solution),
            "budget_hint": self.budget_hint,
        }

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


class Problem:
    """A single evaluatable problem with counters, best-so-far, and hit log.

    evaluate() applies the instance transformation (translation to x_opt plus
    the f_opt offset), counts the evaluation, and records first hits of each
    target precision.
    """

    def __init__(
        self,
        descriptor: ProblemDescriptor,
        raw: Callable[[Sequence[float]], float],
        raw_optimum: Sequence[float],
        lower_bounds: Sequence[float],
        upper_bounds: Sequence[float],
        num_objectives: int = 1,
        num_constraints: int = 0,
    ):
        n = descriptor.dimension
        if len(lower_bounds) != n or len(upper_bounds) != n:
            raise ValueError("bounds length must equal dimension")
        if len(raw_optimum) != n:
            raise ValueError("raw optimum length must equal dimension")
        if any(x < lo or x > hi for x, lo, hi in
               zip(descriptor.x_opt, lower_bounds, upper_bounds)):
            raise ValueError("x_opt must lie within the search domain of interest")
        self.descriptor = descriptor
        self._raw = raw
        self._raw_optimum = tuple(raw_optimum)
        self.lower_bounds = tuple(lower_bounds)
        self.upper_bounds = tuple(upper_bounds)
        self.num_objectives = num_objectives
        self.num_constraints = num_constraints
        self.evaluations = 0
        self.constraint_evaluations = 0
        self.best_f = math.inf
        self.hit_log: list[tuple[float, int]] = []
        self._next_target = 0  # index of the largest precision not yet hit
        self._observer = None  # set by Observer.observe()

    @property
    def dimension(self) -> int:
        return self.descriptor.dimension

    def evaluate(self, x: Sequence[float]) -> float:
        """Evaluate at x; counts the call and tracks target hits.

        Inputs are not clamped to the domain of interest: the function is
        defined on all of R^n. Contract violations do not count.
        """
        d = self.descriptor
        if len(x) != d.dimension:
            raise ContractViolationError(
                f"x has length {len(x)}, problem dimension is {d.dimension}"
            )
        if not all(math.isfinite(v) for v in x):
            raise ContractViolationError("x must be finite")
        z = [xi - oi + ri for xi, oi, ri in zip(x, d.x_opt, self._raw_optimum)]
        f = self._raw(z) + d.f_opt
        self.evaluations += 1
        if f < self.best_f:
            self.best_f = f
        targets = d.target_precisions
        while self._next_target < len(targets) and f <= d.f_opt + targets[self._next_target]:
            precision = targets[self._next_target]
            self.hit_log.append((precision, self.evaluations))
            if self._observer is not None:
                self._observer._record_hit(self, precision, self.evaluations, f)
            self._next_target += 1
        if self._observer is not None:
            self._observer._record_evaluation(self, self.evaluations, f)
        return f

    def evaluate_constraint(self, x: Sequence[float]) -> list[float]:
        """Evaluate constraints at x. All shipped suites are constraint-free,
        so this raises without counting."""
        if self.num_constraints == 0:
            raise UnsupportedOperationError("problem has no constraints")
        raise NotImplementedError("constrained problems are not shipped")

    def final_target_hit(self) -> bool:
        """True once the best observed value is within the final precision."""
        return self.best_f <= self.descriptor.f_opt + self.descriptor.final_precision

    def get_evaluations(self) -> int:
        return self.evaluations

    def algorithm_view(self, budget_hint: Optional[int] = None) -> AlgorithmView:
        """The restricted, identity-free view handed to algorithms.

        The initial solution is the center of the domain of interest, which
        is feasible by construction.
        """
        center = tuple(
            (lo + hi) / 2.0 for lo, hi in zip(self.lower_bounds, self.upper_bounds)
        )
        return AlgorithmView(
            dimension=self.dimension,
            num_objectives=self.num_objectives,
            num_constraints=self.num_constraints,
            lower_bounds=self.lower_bounds,
            upper_bounds=self.upper_bounds,
            initial_solution=center,
            budget_hint=budget_hint,
        )
