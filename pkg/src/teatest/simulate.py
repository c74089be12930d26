"""Seeded Monte Carlo simulation of the tasting experiment.

Each replication draws a truth uniformly, draws an answer from the
configured class distribution by inverting the class decomposition (pick a
loss class by its mass, then a uniform member of that class), and applies
the rejection region to the realized loss. Every replication owns a
private random stream derived from (seed, replication index), so reports
are bit-identical for any worker count, and aggregation is pure integer
reduction.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .combinatorics import Assignment, ExperimentDesign, LossClassTable, loss_class_table
from .entropy import ClassDistribution
from .errors import DesignError
from .exact_tests import RejectionRegion, _check_region, null_class_distribution
from .gibbs import optimal_distribution
from .rng import MASK64, SplitMix64, stream_for


@dataclass(frozen=True)
class SimConfig:
    """One simulation: design, alternative (None = uniform null), test, size."""

    design: ExperimentDesign
    region: RejectionRegion
    replications: int
    seed: int
    entropy_level: float | None = None
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise DesignError(f"replications must be >= 1, got {self.replications}")
        if self.workers < 1:
            raise DesignError(f"workers must be >= 1, got {self.workers}")
        if not 0 <= self.seed <= MASK64:
            raise DesignError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class SimReport:
    rejection_rate: float
    standard_error: float
    mean_loss: float
    loss_histogram: tuple[int, ...]
    replications: int
    seed: int


def _truth_bits(rng: SplitMix64, cups: int, tm_cups: int) -> int:
    # partial Fisher-Yates: the first tm_cups slots of a shuffled position list
    perm = list(range(cups))
    bits = 0
    for j in range(tm_cups):
        r = j + rng.next_below(cups - j)
        perm[j], perm[r] = perm[r], perm[j]
        bits |= 1 << perm[j]
    return bits


def _choose_bits(rng: SplitMix64, items: list, count: int) -> int:
    """OR of ``count`` uniformly chosen items; draws only when 0 < count < len."""
    m = len(items)
    if count <= 0:
        return 0
    if count >= m:
        bits = 0
        for p in items:
            bits |= 1 << p
        return bits
    bits = 0
    for j in range(count):
        r = j + rng.next_below(m - j)
        items[j], items[r] = items[r], items[j]
        bits |= 1 << items[j]
    return bits


def _answer_bits(rng, cum_masses, successes, cups, tm_cups, truth_bits):
    """Draw a loss class by mass, then a uniform member; returns (k0, bits)."""
    u = rng.next_double()
    k = 0
    last = len(cum_masses) - 1
    while k < last and u >= cum_masses[k]:
        k += 1
    b = successes[k]
    tm_positions = []
    mt_positions = []
    for p in range(cups):
        if (truth_bits >> p) & 1:
            tm_positions.append(p)
        else:
            mt_positions.append(p)
    bits = _choose_bits(rng, tm_positions, b)
    bits |= _choose_bits(rng, mt_positions, tm_cups - b)
    return k, bits


def sample_truth(rng: SplitMix64, design: ExperimentDesign) -> Assignment:
    """A uniform draw from the answer space."""
    return Assignment(design, _truth_bits(rng, design.cups, design.tm_cups))


def sample_answer(
    rng: SplitMix64,
    table: LossClassTable,
    dist: ClassDistribution,
    truth: Assignment,
) -> Assignment:
    """An answer whose loss against ``truth`` is distributed per ``dist``."""
    if truth.design != table.design:
        raise DesignError("truth assignment does not match the table's design")
    cum = _cumulative_masses(dist)
    _, bits = _answer_bits(
        rng, cum, table.successes, table.design.cups, table.design.tm_cups, truth.bits
    )
    return Assignment(table.design, bits)


def _cumulative_masses(dist: ClassDistribution) -> tuple[float, ...]:
    cum = []
    running = 0.0
    for m in dist.class_masses():
        running += m
        cum.append(running)
    return tuple(cum)


def _run_chunk(cups, tm_cups, cum_masses, successes, reject_flags, seed, start, stop):
    rejections = 0
    loss_total = 0
    histogram = [0] * len(cum_masses)
    for i in range(start, stop):
        rng = stream_for(seed, i)
        truth = _truth_bits(rng, cups, tm_cups)
        k, answer = _answer_bits(rng, cum_masses, successes, cups, tm_cups, truth)
        loss_total += (truth ^ answer).bit_count()
        histogram[k] += 1
        if reject_flags[k]:
            rejections += 1
    return rejections, loss_total, histogram


def run_simulation(config: SimConfig) -> SimReport:
    """Replications of the experiment with exact reproducibility.

    The report is a pure function of (design, alternative, region,
    replications, seed); the worker count only partitions the replication
    range.
    """
    table = loss_class_table(config.design)
    _check_region(table, config.region)
    if config.entropy_level is None:
        dist = null_class_distribution(table)
    else:
        dist = optimal_distribution(table, config.entropy_level).dist
    cum = _cumulative_masses(dist)
    reject_flags = tuple(k in config.region.classes for k in range(1, table.class_count + 1))
    m = config.replications
    workers = min(config.workers, m)
    bounds = [m * i // workers for i in range(workers + 1)]
    args = [
        (
            config.design.cups,
            config.design.tm_cups,
            cum,
            table.successes,
            reject_flags,
            config.seed,
            bounds[i],
            bounds[i + 1],
        )
        for i in range(workers)
    ]
    if workers == 1:
        parts = [_run_chunk(*args[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk_star, args))
    rejections = sum(p[0] for p in parts)
    loss_total = sum(p[1] for p in parts)
    histogram = [0] * table.class_count
    for p in parts:
        for k, count in enumerate(p[2]):
            histogram[k] += count
    rate = rejections / m
    return SimReport(
        rejection_rate=rate,
        standard_error=math.sqrt(rate * (1.0 - rate) / m),
        mean_loss=loss_total / m,
        loss_histogram=tuple(histogram),
        replications=m,
        seed=config.seed,
    )


def _run_chunk_star(args):
    return _run_chunk(*args)
