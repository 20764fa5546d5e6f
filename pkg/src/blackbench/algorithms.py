"""Builtin optimizers.

An algorithm start is a generator: it yields candidate points and receives
the f-value of the previous candidate via send(). Returning ends the start
naturally, which the runner treats as a restart signal. The generator sees
only the AlgorithmView and its own RNG, never the problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generator

from .problem import AlgorithmView
from .rng import Rng64

Proposals = Generator[list[float], float, None]
# make(view, run_seed, restart) -> proposal generator for one start
StartFactory = Callable[[AlgorithmView, int, int], Proposals]


@dataclass(frozen=True)
class AlgorithmFactory:
    """A named algorithm plus its base seed.

    `make` receives only the restricted view, a run seed that is a pure
    function of (seed, problem, restart), and the restart ordinal; problem
    identity cannot reach the algorithm through this signature.
    """

    name: str
    seed: int
    make: StartFactory


def random_search(view: AlgorithmView, rng: Rng64) -> Proposals:
    """Uniform sampling in the domain of interest; never terminates itself."""
    lower, upper = view.lower_bounds, view.upper_bounds
    while True:
        yield [rng.uniform_in(lo, hi) for lo, hi in zip(lower, upper)]


def local_search_1p1(view: AlgorithmView, rng: Rng64) -> Proposals:
    """(1+1) elitist local search with step-size halving.

    Starts from the initial solution, perturbs the best-so-far with Gaussian
    steps, halves sigma after 20 non-improvements, and terminates naturally
    once sigma drops below 1e-9 so the runner can restart it.
    """
    best = list(view.initial_solution)
    best_f = yield list(best)
    sigma = 0.1 * max(
        hi - lo for lo, hi in zip(view.lower_bounds, view.upper_bounds)
    )
    stall = 0
    while sigma >= 1e-9:
        candidate = [x + sigma * rng.normal() for x in best]
        f = yield candidate
        if f < best_f:
            best, best_f = candidate, f
            stall = 0
        else:
            stall += 1
            if stall >= 20:
                sigma *= 0.5
                stall = 0


def _builtin(name: str, start: Callable[[AlgorithmView, Rng64], Proposals]) -> StartFactory:
    def make(view: AlgorithmView, run_seed: int, restart: int) -> Proposals:
        return start(view, Rng64(run_seed))

    make.__name__ = name
    return make


BUILTIN_ALGORITHMS: dict[str, StartFactory] = {
    "random-search": _builtin("random-search", random_search),
    "local-search-1p1": _builtin("local-search-1p1", local_search_1p1),
}


def builtin_factory(name: str, seed: int) -> AlgorithmFactory:
    try:
        make = BUILTIN_ALGORITHMS[name]
    except KeyError:
        raise KeyError(
            f"unknown algorithm {name!r} (builtin: {sorted(BUILTIN_ALGORITHMS)})"
        ) from None
    return AlgorithmFactory(name=name, seed=seed, make=make)
