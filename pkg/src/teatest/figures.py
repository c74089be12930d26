"""Entropy level sets on low-dimensional simplices and optimal paths.

Produces the data behind entropy-versus-payoff pictures: a barycentric
grid of entropy values over the 1- or 2-simplex, and the path of
payoff-maximizing distributions at each entropy level, which starts at the
uniform distribution (maximum entropy) and concentrates on the best payoff
coordinate as the level drops. Output is long-format rows, one per point;
rendering is out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .entropy import shannon_entropy
from .errors import InfeasibleEntropyError
from .gibbs import DEFAULT_TOL, _probabilities, _solve_beta


@dataclass(frozen=True)
class SimplexGridPoint:
    coordinates: tuple[float, ...]
    entropy: float


@dataclass(frozen=True)
class OptimalPathPoint:
    entropy_level: float
    distribution: tuple[float, ...]
    payoff: float


@dataclass(frozen=True)
class OptimalPath:
    points: tuple[OptimalPathPoint, ...]
    tied_maxima: bool


def entropy_grid(dimension: int, resolution: int) -> list[SimplexGridPoint]:
    """Uniform barycentric grid with the entropy at every node."""
    if dimension not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {dimension}")
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    points = []
    if dimension == 2:
        for i in range(resolution + 1):
            coords = (i / resolution, (resolution - i) / resolution)
            points.append(SimplexGridPoint(coords, shannon_entropy(coords)))
    else:
        for i in range(resolution + 1):
            for j in range(resolution + 1 - i):
                coords = (i / resolution, j / resolution, (resolution - i - j) / resolution)
                points.append(SimplexGridPoint(coords, shannon_entropy(coords)))
    return points


def payoff_ties(payoff) -> bool:
    top = max(payoff)
    return sum(1 for c in payoff if c == top) > 1


def optimal_path(payoff, h_grid, tol: float = DEFAULT_TOL) -> OptimalPath:
    """Payoff-maximizing distribution at each entropy level in the grid.

    Each point is the exponential-family distribution p_i proportional to
    exp(beta c_i) with beta solved from the entropy constraint. With tied
    maximal payoffs the low-entropy limit is an even split over the tied
    coordinates rather than a single vertex; the flag reports that.
    """
    payoff = [float(c) for c in payoff]
    if len(payoff) < 2:
        raise ValueError("payoff must have at least two coordinates")
    for c in payoff:
        if not math.isfinite(c):
            raise ValueError(f"payoff coordinates must be finite, got {c}")
    weights = [1] * len(payoff)
    h_max = math.log(len(payoff))
    points = []
    for h in h_grid:
        if h <= 0.0 or h > h_max + tol:
            raise InfeasibleEntropyError(
                f"entropy level {h} outside the feasible range (0, {h_max}]"
            )
        beta = _solve_beta(weights, payoff, h, tol)
        p = _probabilities(weights, payoff, beta)
        value = math.fsum(pi * ci for pi, ci in zip(p, payoff))
        points.append(OptimalPathPoint(entropy_level=h, distribution=tuple(p), payoff=value))
    return OptimalPath(points=tuple(points), tied_maxima=payoff_ties(payoff))


def grid_rows(points) -> list[dict]:
    """Long-format rows for the entropy grid (one per node)."""
    rows = []
    for pt in points:
        row = {"kind": "grid"}
        for i, c in enumerate(pt.coordinates, start=1):
            row[f"p{i}"] = c
        row["entropy"] = pt.entropy
        row["payoff"] = None
        rows.append(row)
    return rows


def path_rows(path: OptimalPath) -> list[dict]:
    """Long-format rows for the optimal path (one per level)."""
    rows = []
    for pt in path.points:
        row = {"kind": "path"}
        for i, c in enumerate(pt.distribution, start=1):
            row[f"p{i}"] = c
        row["entropy"] = pt.entropy_level
        row["payoff"] = pt.payoff
        rows.append(row)
    return rows
