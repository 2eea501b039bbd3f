"""Nelder-Mead simplex minimization for small, smooth, unconstrained problems.

Written in plain Python floats: the problems here have 3-4 parameters and
cheap objectives, where per-iteration array overhead would dominate.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence


class SimplexResult(NamedTuple):
    x: list[float]
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    best_trace: list[float] | None = None


def _diameter(points: list[list[float]]) -> float:
    d = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = max(d, math.dist(points[i], points[j]))
    return d


def nelder_mead(
    f: Callable[[Sequence[float]], float],
    x0: Sequence[float],
    step: float = 0.5,
    tol: float = 1e-10,
    max_iterations: int = 2000,
    record: bool = False,
) -> SimplexResult:
    """Minimize ``f`` starting from an axis-aligned simplex around ``x0``.

    Iteration stops once the simplex diameter (largest vertex-to-vertex
    distance) drops below ``tol``.  Standard coefficients are used:
    reflection 1, expansion 2, contraction 1/2, shrink 1/2.  With
    ``record=True`` the best objective value after every iteration is kept
    in ``best_trace``.
    """
    dim = len(x0)
    points = [list(map(float, x0))]
    for k in range(dim):
        p = list(points[0])
        p[k] += step
        points.append(p)
    values = [f(p) for p in points]
    evaluations = dim + 1
    trace: list[float] | None = [] if record else None

    iterations = 0
    converged = False
    while True:
        order = sorted(range(dim + 1), key=values.__getitem__)
        points = [points[i] for i in order]
        values = [values[i] for i in order]
        if trace is not None:
            trace.append(values[0])
        if _diameter(points) < tol:
            converged = True
            break
        if iterations >= max_iterations:
            break
        iterations += 1

        worst = points[-1]
        centroid = [sum(p[k] for p in points[:-1]) / dim for k in range(dim)]
        reflected = [c + (c - w) for c, w in zip(centroid, worst)]
        f_r = f(reflected)
        evaluations += 1
        if f_r < values[0]:
            expanded = [c + 2.0 * (c - w) for c, w in zip(centroid, worst)]
            f_e = f(expanded)
            evaluations += 1
            if f_e < f_r:
                points[-1], values[-1] = expanded, f_e
            else:
                points[-1], values[-1] = reflected, f_r
            continue
        if f_r < values[-2]:
            points[-1], values[-1] = reflected, f_r
            continue
        if f_r < values[-1]:
            contracted = [c + 0.5 * (r - c) for c, r in zip(centroid, reflected)]
            f_c = f(contracted)
            accept = f_c <= f_r
        else:
            contracted = [c + 0.5 * (w - c) for c, w in zip(centroid, worst)]
            f_c = f(contracted)
            accept = f_c < values[-1]
        evaluations += 1
        if accept:
            points[-1], values[-1] = contracted, f_c
            continue
        best = points[0]
        for i in range(1, dim + 1):
            points[i] = [b + 0.5 * (p - b) for b, p in zip(best, points[i])]
            values[i] = f(points[i])
        evaluations += dim

    return SimplexResult(points[0], values[0], iterations, evaluations, converged, trace)
