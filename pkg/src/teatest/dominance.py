"""First-order stochastic dominance of loss distributions.

On a finite loss support, distribution B first-order stochastically
dominates distribution A (B is stochastically larger) exactly when B's CDF
lies weakly below A's at every threshold, equivalently when every
non-decreasing function of the loss has a weakly larger expectation under
B. Both characterizations are implemented; the CDF form is the fast check
and the expectation form documents the equivalence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .combinatorics import LossClassTable
from .entropy import ClassDistribution
from .errors import DesignError
from .gibbs import GibbsSolution

DOMINANCE_TOL = 1e-10
NULL_COMPARISON_TOL = 1e-12


@dataclass(frozen=True)
class LossCdf:
    """Cumulative class masses in loss-ascending order."""

    table: LossClassTable
    values: tuple[float, ...]


@dataclass(frozen=True)
class FosdVerdict:
    dominates: bool
    max_violation: float


@dataclass(frozen=True)
class NullComparison:
    """Per-class position of a distribution against the uniform null."""

    labels: tuple[str, ...]
    null_mean_loss: float


def loss_cdf(dist: ClassDistribution) -> LossCdf:
    masses = dist.class_masses()
    values = []
    running = 0.0
    for m in masses:
        running += m
        values.append(running)
    return LossCdf(dist.table, tuple(values))


def fosd_check(low: GibbsSolution, high: GibbsSolution) -> FosdVerdict:
    """Does the higher-entropy loss distribution dominate the lower one?

    True when, at every loss threshold, the high-entropy CDF is at most the
    low-entropy CDF plus a small tolerance; the largest signed CDF excess is
    returned for diagnostics. Callers are expected to pass solutions with
    low.entropy <= high.entropy; a swapped pair simply fails the check,
    since dominance is strict between distinct entropy levels.
    """
    if low.dist.table != high.dist.table:
        raise DesignError("solutions come from different loss-class tables")
    low_cdf = loss_cdf(low.dist).values
    high_cdf = loss_cdf(high.dist).values
    max_violation = max(h - l for h, l in zip(high_cdf, low_cdf))
    return FosdVerdict(dominates=max_violation <= DOMINANCE_TOL, max_violation=max_violation)


def class_expectation(dist: ClassDistribution, values) -> float:
    """Expectation of a per-class statistic, sum of a_k p_k v_k."""
    values = list(values)
    if len(values) != dist.table.class_count:
        raise DesignError(
            f"expected {dist.table.class_count} per-class values, got {len(values)}"
        )
    return math.fsum(
        a * p * v for a, p, v in zip(dist.table.multiplicities, dist.probabilities, values)
    )


def classify_vs_null(solution: GibbsSolution) -> NullComparison:
    """Label each loss class above, equal to, or below its null probability.

    Near the null an informative minimizer raises the probability of every
    class whose success count exceeds the null mean and lowers the rest; at
    strong concentration all mass flows to the top class and interior
    classes drop below their null probability too, so labels are always the
    computed signs, never inferred from the mean. The class sitting exactly
    at the null mean loss is likewise reported with its computed sign. The
    null mean loss 2 n (N - n) / N is returned for reference.
    """
    table = solution.dist.table
    null_p = 1.0 / table.total
    labels = []
    for p in solution.dist.probabilities:
        gap = p - null_p
        if gap > NULL_COMPARISON_TOL:
            labels.append("above")
        elif gap < -NULL_COMPARISON_TOL:
            labels.append("below")
        else:
            labels.append("equal")
    design = table.design
    null_mean_loss = 2.0 * design.tm_cups * design.mt_cups / design.cups
    return NullComparison(labels=tuple(labels), null_mean_loss=null_mean_loss)
