"""Deterministic 64-bit RNG used for instance generation and builtin algorithms.

splitmix64 is used everywhere a random number is needed so that experiments
are bit-reproducible across runs, thread counts, and reimplementations in
other languages.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class Rng64:
    """splitmix64 generator over a 64-bit state."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        """Return the next 64-bit unsigned output."""
        self.state = (self.state + _GOLDEN) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1), from the top 53 bits."""
        return (self.next() >> 11) * 2.0**-53

    def uniform_in(self, lower: float, upper: float) -> float:
        return lower + (upper - lower) * self.uniform()

    def normal(self) -> float:
        """Standard normal via Box-Muller (one value per call, no caching)."""
        # u1 > 0 is required for the log; the top-53-bit uniform can be 0.0.
        u1 = self.uniform()
        while u1 <= 0.0:
            u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def derive_seed(seed: int, *parts: int) -> int:
    """Fold ordinals into a seed; pure function of (seed, parts).

    Each part advances one splitmix64 step of (state XOR part), so streams
    derived for different problems or restarts are decorrelated.
    """
    state = seed & _MASK64
    for part in parts:
        state = Rng64(state ^ (part & _MASK64)).next()
    return state
