import math

import pytest

from teatest.combinatorics import ExperimentDesign, enumerate_assignments, loss, loss_class_table
from teatest.entropy import max_entropy
from teatest.errors import DesignError
from teatest.exact_tests import (
    RejectionRegion,
    exact_size,
    fisher_right,
    null_class_distribution,
)
from teatest.gibbs import gibbs_distribution, optimal_distribution
from teatest.rng import stream_for
from teatest.simulate import SimConfig, SimReport, run_simulation, sample_answer, sample_truth

DESIGN = ExperimentDesign(8, 4)
TABLE = loss_class_table(DESIGN)


def test_sample_truth_is_valid_and_deterministic():
    rng = stream_for(2024, 0)
    draws = [sample_truth(rng, DESIGN) for _ in range(200)]
    assert all(d.bits.bit_count() == 4 for d in draws)
    rng2 = stream_for(2024, 0)
    again = [sample_truth(rng2, DESIGN) for _ in range(200)]
    assert draws == again


def test_sample_truth_class_frequencies():
    # distances from a fixed reference should histogram like the multiplicities
    reference = next(enumerate_assignments(DESIGN))
    rng = stream_for(99, 0)
    n = 100_000
    counts = [0] * TABLE.class_count
    for _ in range(n):
        draw = sample_truth(rng, DESIGN)
        counts[loss(draw, reference) // 2] += 1
    for count, a in zip(counts, TABLE.multiplicities):
        expected = n * a / TABLE.total
        se = math.sqrt(n * (a / TABLE.total) * (1 - a / TABLE.total))
        assert abs(count - expected) <= 4 * se, (count, expected, se)


def test_sample_answer_dirac_reproduces_truth():
    from teatest.entropy import ClassDistribution

    dirac = ClassDistribution(TABLE, (1.0, 0.0, 0.0, 0.0, 0.0))
    rng = stream_for(5, 0)
    truth = sample_truth(rng, DESIGN)
    for _ in range(100):
        assert sample_answer(rng, TABLE, dirac, truth) == truth


def test_sample_answer_uniform_is_uniform_over_assignments():
    design = ExperimentDesign(6, 3)
    table = loss_class_table(design)
    dist = null_class_distribution(table)
    rng = stream_for(314, 0)
    truth = sample_truth(rng, design)
    counts = {}
    n = 60_000
    for _ in range(n):
        x = sample_answer(rng, table, dist, truth)
        counts[x.bits] = counts.get(x.bits, 0) + 1
    assert len(counts) == 20
    expected = n / 20
    se = math.sqrt(n * (1 / 20) * (19 / 20))
    for count in counts.values():
        assert abs(count - expected) <= 4 * se, (count, expected)


def test_sample_answer_loss_histogram_matches_class_masses():
    dist = gibbs_distribution(TABLE, 1.0)
    masses = dist.class_masses()
    rng = stream_for(777, 0)
    truth = sample_truth(rng, DESIGN)
    n = 100_000
    counts = [0] * TABLE.class_count
    for _ in range(n):
        x = sample_answer(rng, TABLE, dist, truth)
        counts[loss(x, truth) // 2] += 1
    for count, mass in zip(counts, masses):
        se = math.sqrt(n * mass * (1 - mass))
        assert abs(count - n * mass) <= 4 * se + 1.0, (count, n * mass, se)


def test_sample_answer_design_mismatch():
    other = ExperimentDesign(6, 3)
    rng = stream_for(1, 0)
    truth = sample_truth(rng, other)
    with pytest.raises(DesignError):
        sample_answer(rng, TABLE, null_class_distribution(TABLE), truth)


def test_run_simulation_agrees_with_manual_two_step_loop():
    config = SimConfig(
        design=DESIGN,
        region=fisher_right(TABLE),
        replications=300,
        seed=20240809,
        entropy_level=max_entropy(DESIGN) * 0.5,
    )
    report = run_simulation(config)
    dist = optimal_distribution(TABLE, config.entropy_level).dist
    histogram = [0] * TABLE.class_count
    rejections = 0
    loss_total = 0
    for i in range(config.replications):
        rng = stream_for(config.seed, i)
        truth = sample_truth(rng, DESIGN)
        answer = sample_answer(rng, TABLE, dist, truth)
        realized = loss(answer, truth)
        loss_total += realized
        k = realized // 2 + 1
        histogram[k - 1] += 1
        if k in config.region.classes:
            rejections += 1
    assert report.loss_histogram == tuple(histogram)
    assert report.rejection_rate == rejections / config.replications
    assert report.mean_loss == loss_total / config.replications


def test_run_simulation_null_matches_exact_size():
    config = SimConfig(
        design=DESIGN,
        region=fisher_right(TABLE),
        replications=20_000,
        seed=11,
        entropy_level=None,
    )
    report = run_simulation(config)
    size = exact_size(TABLE, config.region).size
    se = math.sqrt(size * (1 - size) / config.replications)
    assert abs(report.rejection_rate - size) <= 4 * se
    assert sum(report.loss_histogram) == config.replications
    assert report.standard_error == pytest.approx(
        math.sqrt(report.rejection_rate * (1 - report.rejection_rate) / config.replications),
        abs=1e-15,
    )
    assert report.seed == 11
    assert report.replications == 20_000


def test_run_simulation_worker_count_is_invisible():
    reports: list[SimReport] = []
    for workers in (1, 3):
        config = SimConfig(
            design=DESIGN,
            region=fisher_right(TABLE),
            replications=10_000,
            seed=555,
            entropy_level=None,
            workers=workers,
        )
        reports.append(run_simulation(config))
    assert reports[0] == reports[1]


def test_run_simulation_dirac_alternative():
    config = SimConfig(
        design=DESIGN,
        region=fisher_right(TABLE),
        replications=5_000,
        seed=31337,
        entropy_level=1e-6,
    )
    report = run_simulation(config)
    assert report.rejection_rate == 1.0
    assert report.mean_loss == 0.0


def test_config_validation():
    with pytest.raises(DesignError):
        SimConfig(design=DESIGN, region=fisher_right(TABLE), replications=0, seed=1)
    with pytest.raises(DesignError):
        SimConfig(design=DESIGN, region=fisher_right(TABLE), replications=1, seed=1, workers=0)
    with pytest.raises(DesignError):
        SimConfig(design=DESIGN, region=fisher_right(TABLE), replications=1, seed=-1)
    with pytest.raises(DesignError):
        run_simulation(
            SimConfig(
                design=DESIGN,
                region=RejectionRegion(frozenset({9})),
                replications=1,
                seed=1,
            )
        )
