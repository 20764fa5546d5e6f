"""Raw scalable test functions.

Each function is evaluated on the already-transformed input z and has value 0
at its own optimum location. Function ids follow the usual single-objective
noiseless numbering; only the four slots below are implemented, the remaining
ids exist purely for suite index arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence


def sphere(z: Sequence[float]) -> float:
    """f1, sum of squares. Optimum 0 at the origin."""
    return math.fsum(v * v for v in z)


def ellipsoid(z: Sequence[float]) -> float:
    """f2, axis-aligned with condition number 1e6. Optimum 0 at the origin."""
    n = len(z)
    if n == 1:
        return z[0] * z[0]
    return math.fsum(10.0 ** (6.0 * i / (n - 1)) * z[i] * z[i] for i in range(n))


def rastrigin(z: Sequence[float]) -> float:
    """f3, 10(n - sum cos 2 pi z_i) + sum z_i^2. Optimum 0 at the origin."""
    n = len(z)
    return 10.0 * (n - math.fsum(math.cos(2.0 * math.pi * v) for v in z)) + math.fsum(
        v * v for v in z
    )


def rosenbrock(z: Sequence[float]) -> float:
    """f8, banana valley. Optimum 0 at all-ones."""
    return math.fsum(
        100.0 * (z[i] * z[i] - z[i + 1]) ** 2 + (z[i] - 1.0) ** 2
        for i in range(len(z) - 1)
    )


def _origin(n: int) -> tuple[float, ...]:
    return (0.0,) * n


def _all_ones(n: int) -> tuple[float, ...]:
    return (1.0,) * n


@dataclass(frozen=True)
class RawFunction:
    """A raw function plus the location of its optimum in z-space."""

    function_id: int
    name: str
    evaluate: Callable[[Sequence[float]], float]
    optimum: Callable[[int], tuple[float, ...]]


RAW_FUNCTIONS: dict[int, RawFunction] = {
    1: RawFunction(1, "sphere", sphere, _origin),
    2: RawFunction(2, "ellipsoid", ellipsoid, _origin),
    3: RawFunction(3, "rastrigin", rastrigin, _origin),
    8: RawFunction(8, "rosenbrock", rosenbrock, _all_ones),
}

IMPLEMENTED_IDS = frozenset(RAW_FUNCTIONS)


def raw_function(function_id: int, z: Sequence[float]) -> float:
    """Evaluate raw function `function_id` at z.

    Raises NotImplementedError for ids that are index-arithmetic slots only.
    """
    try:
        fn = RAW_FUNCTIONS[function_id]
    except KeyError:
        raise NotImplementedError(
            f"function {function_id} is not implemented (valid: {sorted(IMPLEMENTED_IDS)})"
        ) from None
    return fn.evaluate(z)
