import math

import pytest

from teatest.combinatorics import (
    ExperimentDesign,
    enumerate_assignments,
    loss,
    loss_class_table,
)
from teatest.entropy import class_entropy, max_entropy
from teatest.errors import DesignError
from teatest.exact_tests import (
    LEFT_SUCCESS,
    RIGHT_SUCCESS,
    TWO_SIDED,
    RejectionRegion,
    exact_size,
    fisher_right,
    information_left,
    null_class_distribution,
    p_value,
    power,
    power_curve,
    region_by_name,
    two_sided_union,
)

TABLE = loss_class_table(ExperimentDesign(8, 4))
HBAR = max_entropy(ExperimentDesign(8, 4))


def test_named_regions():
    assert fisher_right(TABLE).classes == frozenset({1})
    assert information_left(TABLE).classes == frozenset({5})
    assert two_sided_union(TABLE).classes == frozenset({1, 5})
    assert region_by_name(TABLE, "fisher-right") == fisher_right(TABLE)
    with pytest.raises(DesignError):
        region_by_name(TABLE, "nonsense")
    with pytest.raises(DesignError):
        RejectionRegion(frozenset())


def test_exact_sizes_are_exact_rationals():
    right = exact_size(TABLE, fisher_right(TABLE))
    left = exact_size(TABLE, information_left(TABLE))
    union = exact_size(TABLE, two_sided_union(TABLE))
    assert (right.size_numerator, right.size_denominator) == (1, 70)
    assert (left.size_numerator, left.size_denominator) == (1, 70)
    assert (union.size_numerator, union.size_denominator) == (2, 70)
    assert right.size == 1 / 70
    assert union.size == 2 / 70
    # printed-precision decimals
    assert round(right.size, 3) == 0.014
    assert round(union.size, 3) == 0.029
    assert right.rejects_at_level and left.rejects_at_level and union.rejects_at_level


def test_exact_size_level_comparison_is_exact():
    report = exact_size(TABLE, fisher_right(TABLE), level=0.01)
    assert not report.rejects_at_level
    # boundary: size exactly equal to the level still qualifies
    table_20 = loss_class_table(ExperimentDesign(6, 3))
    report_20 = exact_size(table_20, fisher_right(table_20), level=0.05)
    assert (report_20.size_numerator, report_20.size_denominator) == (1, 20)
    assert report_20.rejects_at_level


def test_region_validation_against_table():
    with pytest.raises(DesignError):
        exact_size(TABLE, RejectionRegion(frozenset({6})))


def test_null_distribution():
    dist = null_class_distribution(TABLE)
    assert dist.probabilities == (1.0 / 70,) * 5
    masses = dist.class_masses()
    for got, a in zip(masses, (1, 16, 36, 16, 1)):
        assert got == pytest.approx(a / 70, abs=1e-15)
    assert class_entropy(dist) == pytest.approx(math.log(70), abs=1e-12)


def test_p_values_at_the_extremes():
    right = p_value(TABLE, 0, RIGHT_SUCCESS)
    assert (right.numerator, right.denominator) == (1, 70)
    left = p_value(TABLE, 8, LEFT_SUCCESS)
    assert (left.numerator, left.denominator) == (1, 70)
    two = p_value(TABLE, 0, TWO_SIDED)
    assert (two.numerator, two.denominator) == (2, 70)


def test_p_values_interior_loss():
    assert p_value(TABLE, 4, RIGHT_SUCCESS).numerator == 1 + 16 + 36
    assert p_value(TABLE, 4, LEFT_SUCCESS).numerator == 36 + 16 + 1
    assert p_value(TABLE, 4, TWO_SIDED).numerator == 70  # every class mass <= 36
    assert p_value(TABLE, 2, TWO_SIDED).numerator == 1 + 16 + 16 + 1


def test_p_value_validation():
    with pytest.raises(DesignError):
        p_value(TABLE, 3, RIGHT_SUCCESS)
    with pytest.raises(DesignError):
        p_value(TABLE, 10, RIGHT_SUCCESS)
    with pytest.raises(DesignError):
        p_value(TABLE, 0, "sideways")


def test_power_equals_size_at_max_entropy():
    for region in (fisher_right(TABLE), information_left(TABLE), two_sided_union(TABLE)):
        report = exact_size(TABLE, region)
        assert power(TABLE, region, HBAR) == pytest.approx(report.size, abs=1e-12)


def test_power_limits():
    assert power(TABLE, fisher_right(TABLE), 1e-7) >= 1.0 - 1e-5
    assert power(TABLE, information_left(TABLE), 1e-7) <= 1e-5


def test_power_curve_monotone_for_fisher_right():
    grid = [1e-6] + [HBAR * i / 12 for i in range(1, 13)]
    curve = power_curve(TABLE, fisher_right(TABLE), grid)
    values = [p for _, p in curve]
    assert all(values[i] >= values[i + 1] - 1e-12 for i in range(len(values) - 1))
    assert values[0] >= 1.0 - 1e-4
    assert values[-1] == pytest.approx(1 / 70, abs=1e-12)


def test_union_power_dominates_component():
    grid = [HBAR * i / 8 for i in range(1, 9)]
    union = [p for _, p in power_curve(TABLE, two_sided_union(TABLE), grid)]
    right = [p for _, p in power_curve(TABLE, fisher_right(TABLE), grid)]
    for u, r in zip(union, right):
        assert u >= r - 1e-12


def test_adding_a_class_never_decreases_size_or_power():
    base = RejectionRegion(frozenset({1}))
    grown = RejectionRegion(frozenset({1, 2}))
    assert exact_size(TABLE, grown).size >= exact_size(TABLE, base).size
    for h in (0.25 * HBAR, 0.5 * HBAR, HBAR):
        assert power(TABLE, grown, h) >= power(TABLE, base, h) - 1e-15


def test_size_conditional_on_any_truth_equals_unconditional():
    # exhaustive: for every fixed truth, count answers falling in the region
    design = ExperimentDesign(8, 4)
    assignments = list(enumerate_assignments(design))
    for region in (fisher_right(TABLE), information_left(TABLE), two_sided_union(TABLE)):
        expected = exact_size(TABLE, region).size_numerator
        for truth in assignments:
            hits = sum(
                1
                for x in assignments
                if TABLE.class_of_loss(loss(x, truth)) in region.classes
            )
            assert hits == expected
