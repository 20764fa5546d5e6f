"""Naive reference implementations of the assessment computations.

Deliberately quadratic and transparent; used only by tests to check the fast
implementations in postprocess. Keep these independent: no shared helpers
with the code under test.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .observer import ExperimentLog
from .postprocess import EcdfCurve, ErtEntry
from .problem import default_targets


def ecdf_reference(
    logs: Sequence[ExperimentLog],
    targets: Optional[Sequence[float]] = None,
    normalize_by_dimension: bool = True,
) -> list[EcdfCurve]:
    if not logs:
        raise ValueError("no logs given")
    if targets is None:
        targets = default_targets()
    keys = sorted({
        (str(log.meta.get("algorithm", "unknown")), block.dimension)
        for log in logs
        for block in log.blocks
    })
    curves = []
    for algorithm, dimension in keys:
        pairs: list[Optional[float]] = []
        for log in logs:
            if str(log.meta.get("algorithm", "unknown")) != algorithm:
                continue
            for block in log.blocks:
                if block.dimension != dimension:
                    continue
                for target in targets:
                    runtime = None
                    for record in block.records:
                        if record.target_precision == target:
                            runtime = record.evaluations
                            break
                    if runtime is not None and normalize_by_dimension:
                        runtime = runtime / dimension
                    pairs.append(runtime)
        solved = sorted(r for r in pairs if r is not None)
        xs = sorted(set(solved))
        ys = [
            sum(1 for r in solved if r <= x) / len(pairs)
            for x in xs
        ]
        curves.append(EcdfCurve(
            algorithm=algorithm,
            dimension=dimension,
            normalized=normalize_by_dimension,
            x=tuple(xs),
            y=tuple(ys),
            total_pairs=len(pairs),
            solved_pairs=len(solved),
        ))
    return curves


def ert_reference(
    logs: Sequence[ExperimentLog],
    targets: Optional[Sequence[float]] = None,
) -> list[ErtEntry]:
    if not logs:
        raise ValueError("no logs given")
    if targets is None:
        targets = default_targets()
    keys = sorted({
        (str(log.meta.get("algorithm", "unknown")), block.function_id, block.dimension)
        for log in logs
        for block in log.blocks
    })
    entries = []
    for algorithm, function_id, dimension in keys:
        for target in targets:
            spent = 0
            successes = 0
            runs = 0
            for log in logs:
                if str(log.meta.get("algorithm", "unknown")) != algorithm:
                    continue
                for block in log.blocks:
                    if block.function_id != function_id or block.dimension != dimension:
                        continue
                    runs += 1
                    hit = None
                    for record in block.records:
                        if record.target_precision == target:
                            hit = record.evaluations
                            break
                    if hit is None:
                        spent += block.total_evaluations
                    else:
                        spent += hit
                        successes += 1
            entries.append(ErtEntry(
                algorithm=algorithm,
                function_id=function_id,
                dimension=dimension,
                target=target,
                ert=spent / successes if successes else float("inf"),
                success_count=successes,
                run_count=runs,
            ))
    return entries
