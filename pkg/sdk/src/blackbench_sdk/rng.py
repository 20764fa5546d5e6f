"""splitmix64, matching the benchmark harness bit for bit.

Re-implemented here so the SDK stays dependency-free; the constants and the
seed derivation are part of the documented protocol and must not change.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class Rng64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next() >> 11) * 2.0**-53

    def uniform_in(self, lower: float, upper: float) -> float:
        return lower + (upper - lower) * self.uniform()


def derive_seed(seed: int, *parts: int) -> int:
    """The harness's seed derivation: one splitmix64 step per folded part.

    Deriving the per-start seed as derive_seed(problem_seed, start_ordinal)
    reproduces the builtin algorithms' streams exactly.
    """
    state = seed & _MASK64
    for part in parts:
        state = Rng64(state ^ (part & _MASK64)).next()
    return state
