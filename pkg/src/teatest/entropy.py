"""Shannon entropy of finite distributions, element-wise and by loss class.

Entropy is measured in nats throughout, with the usual 0 * log 0 = 0
convention at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .combinatorics import ExperimentDesign, LossClassTable
from .errors import DesignError

MASS_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ClassDistribution:
    """Per-element probabilities on loss classes.

    ``probabilities[k-1]`` is the probability of each single assignment in
    class k, so class k carries total mass multiplicity * probability and
    the class masses must sum to one. The conditional distribution over the
    whole answer space is recovered by giving every assignment the
    probability of its loss class.
    """

    table: LossClassTable
    probabilities: tuple[float, ...]

    def __post_init__(self):
        if len(self.probabilities) != self.table.class_count:
            raise DesignError(
                f"expected {self.table.class_count} class probabilities, "
                f"got {len(self.probabilities)}"
            )
        for k, p in enumerate(self.probabilities, start=1):
            if p < 0.0 or not math.isfinite(p):
                raise DesignError(f"class {k} probability {p} is not a finite non-negative value")
        mass = math.fsum(
            a * p for a, p in zip(self.table.multiplicities, self.probabilities)
        )
        if abs(mass - 1.0) > MASS_TOL:
            raise DesignError(f"class masses sum to {mass!r}, expected 1 within {MASS_TOL}")

    def class_masses(self) -> tuple[float, ...]:
        return tuple(a * p for a, p in zip(self.table.multiplicities, self.probabilities))


def shannon_entropy(weights) -> float:
    """Entropy -sum(w * log w) of a probability vector, in nats."""
    weights = list(weights)
    for w in weights:
        if w < 0.0 or not math.isfinite(w):
            raise ValueError(f"weights must be finite and non-negative, got {w}")
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights sum to {total!r}, expected 1 within {WEIGHT_SUM_TOL}")
    return -math.fsum(w * math.log(w) for w in weights if w > 0.0) + 0.0


def class_entropy(dist: ClassDistribution) -> float:
    """Entropy of the element-wise distribution, summed class by class.

    Equals shannon_entropy of the expanded distribution that repeats each
    class probability once per member assignment.
    """
    return (
        -math.fsum(
            a * p * math.log(p)
            for a, p in zip(dist.table.multiplicities, dist.probabilities)
            if p > 0.0
        )
        + 0.0
    )


def max_entropy(design: ExperimentDesign) -> float:
    """Largest achievable entropy, log of the answer-space size."""
    return math.log(design.space_size)
