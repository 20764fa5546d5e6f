"""Example optimizers for the SDK.

`main` is installed as blackbench-sdk-random-search and also runs via
`python -m blackbench_sdk.examples`. Pass the harness's per-problem seed
through the command line, e.g.:

    blackbench run --algorithm-cmd "blackbench-sdk-random-search --seed {seed}"
"""

from __future__ import annotations

import argparse
import sys

from .client import ClientProblemView, Evaluator, solve_loop
from .rng import Rng64, derive_seed


def random_search(view: ClientProblemView, evaluate: Evaluator, rng: Rng64) -> None:
    """Uniform sampling in bounds; identical to the harness builtin."""
    while True:
        x = [
            rng.uniform_in(lo, hi)
            for lo, hi in zip(view.lower_bounds, view.upper_bounds)
        ]
        reply = evaluate(x)
        if reply.final_target_hit:
            return


def minimize_style(minimize):
    """Adapt a scipy-style `minimize(fun, x0, bounds)` optimizer to a callback.

    The optimizer only ever sees the objective, the feasible initial point,
    and the bounds; budget exhaustion unwinds it mid-call automatically.

        def my_minimize(fun, x0, bounds): ...
        solve_loop(minimize_style(my_minimize))
    """

    def callback(view: ClientProblemView, evaluate: Evaluator) -> None:
        def fun(x):
            return evaluate(x).f

        minimize(fun, list(view.initial_solution),
                 list(zip(view.lower_bounds, view.upper_bounds)))

    return callback


def axis_search(fun, x0, bounds, shrink=0.5, min_step=1e-9):
    """Tiny coordinate-descent example of a minimize-style optimizer."""
    x = list(x0)
    best = fun(x)
    step = max(hi - lo for lo, hi in bounds) / 4.0
    while step >= min_step:
        improved = False
        for i in range(len(x)):
            for direction in (1.0, -1.0):
                candidate = list(x)
                candidate[i] = min(max(candidate[i] + direction * step,
                                       bounds[i][0]), bounds[i][1])
                value = fun(candidate)
                if value < best:
                    x, best = candidate, value
                    improved = True
        if not improved:
            step *= shrink


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="blackbench SDK example optimizer")
    parser.add_argument("--seed", type=int, default=0,
                        help="per-problem seed (use the runner's {seed} placeholder)")
    parser.add_argument("--optimizer", choices=("random-search", "axis-search"),
                        default="random-search")
    args = parser.parse_args(argv)

    if args.optimizer == "axis-search":
        solve_loop(minimize_style(axis_search))
        return 0

    starts = 0

    def callback(view: ClientProblemView, evaluate: Evaluator) -> None:
        nonlocal starts
        rng = Rng64(derive_seed(args.seed, starts))
        starts += 1
        random_search(view, evaluate, rng)

    solve_loop(callback)
    return 0


if __name__ == "__main__":
    sys.exit(main())
