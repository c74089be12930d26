"""Exact integer combinatorics of fixed-margin cup assignments.

An experiment presents ``cups`` cups of which exactly ``tm_cups`` carry the
first preparation (label 1, "TM") and the rest the second (label 0, "MT").
The answer space is the set of length-``cups`` binary label vectors with
exactly ``tm_cups`` ones. Answers at misclassification distance
``2 * (tm_cups - b)`` from the truth form one loss class per success count
``b``; this module computes those classes exactly, with a brute-force
enumeration oracle alongside.

All counts are exact integers and are required to fit in unsigned 64 bits
so that test sizes downstream remain exact rationals; designs are capped at
62 cups for that reason.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .errors import CombinatoricsOverflowError, DesignError, EnumerationGuardError

UINT64_MAX = (1 << 64) - 1
MAX_CUPS = 62  # C(62, 31) < 2**63
ENUMERATION_LIMIT = 10**7


def binomial(total: int, choose: int) -> int:
    """C(total, choose) by the multiplicative rule with interleaved division.

    The running product after step ``i`` equals C(total - k + i, i), which is
    monotone in ``i``, so the 64-bit check on it also catches every
    intermediate.
    """
    if total < 0 or choose < 0:
        raise DesignError(f"binomial arguments must be non-negative, got ({total}, {choose})")
    if choose > total:
        raise DesignError(f"cannot choose {choose} items from {total}")
    k = min(choose, total - choose)
    result = 1
    for i in range(1, k + 1):
        result = result * (total - k + i) // i
        if result > UINT64_MAX:
            raise CombinatoricsOverflowError(
                f"C({total}, {choose}) exceeds the unsigned 64-bit range"
            )
    return result


@dataclass(frozen=True)
class ExperimentDesign:
    """A design with ``cups`` cups, exactly ``tm_cups`` of the first kind."""

    cups: int
    tm_cups: int

    def __post_init__(self):
        if not 0 < self.tm_cups < self.cups:
            raise DesignError(
                f"need 0 < tm_cups < cups, got tm_cups={self.tm_cups}, cups={self.cups}"
            )
        if 2 * self.tm_cups > self.cups:
            raise DesignError(
                f"need 2 * tm_cups <= cups, got tm_cups={self.tm_cups}, cups={self.cups}"
            )
        if self.cups > MAX_CUPS:
            raise DesignError(
                f"cups capped at {MAX_CUPS} so counts stay exact in 64 bits, got {self.cups}"
            )

    @property
    def mt_cups(self) -> int:
        return self.cups - self.tm_cups

    @property
    def space_size(self) -> int:
        """Number of admissible answers, C(cups, tm_cups)."""
        return binomial(self.cups, self.tm_cups)


@dataclass(frozen=True)
class Assignment:
    """One labelling of the cups; bit j set means cup j is labelled TM."""

    design: ExperimentDesign
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.design.cups):
            raise DesignError(f"bits 0x{self.bits:x} out of range for {self.design.cups} cups")
        if self.bits.bit_count() != self.design.tm_cups:
            raise DesignError(
                f"assignment must set exactly {self.design.tm_cups} bits, "
                f"got {self.bits.bit_count()}"
            )

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple((self.bits >> j) & 1 for j in range(self.design.cups))

    @classmethod
    def from_labels(cls, design: ExperimentDesign, labels) -> "Assignment":
        bits = 0
        for j, lab in enumerate(labels):
            if lab:
                bits |= 1 << j
        return cls(design, bits)

    @classmethod
    def from_tm_positions(cls, design: ExperimentDesign, positions) -> "Assignment":
        bits = 0
        for p in positions:
            bits |= 1 << p
        return cls(design, bits)


@dataclass(frozen=True)
class LossClassTable:
    """Success counts, multiplicities and losses of every loss class.

    Classes are indexed k = 1..tm_cups+1 with success counts descending from
    tm_cups to 0, so class k collects the answers that identify exactly
    ``successes[k-1]`` of the true TM cups; its loss ascends with k. The
    multiplicity of class k counts its answers,
    C(tm_cups, b_k) * C(mt_cups, tm_cups - b_k), and multiplicities sum to
    the full space size (Vandermonde's identity, asserted on construction).
    """

    design: ExperimentDesign
    successes: tuple[int, ...]
    multiplicities: tuple[int, ...]
    losses: tuple[int, ...]
    total: int

    def __post_init__(self):
        n = self.design.tm_cups
        expected_len = n + 1
        for name, values in (
            ("successes", self.successes),
            ("multiplicities", self.multiplicities),
            ("losses", self.losses),
        ):
            if len(values) != expected_len:
                raise DesignError(f"{name} must have {expected_len} entries, got {len(values)}")
        if sum(self.multiplicities) != self.total:
            raise DesignError(
                f"multiplicities sum to {sum(self.multiplicities)}, expected {self.total}"
            )

    @property
    def class_count(self) -> int:
        return len(self.successes)

    def class_of_loss(self, loss_value: int) -> int:
        """1-based class index of an observed loss."""
        if loss_value % 2 != 0 or not 0 <= loss_value <= 2 * self.design.tm_cups:
            raise DesignError(
                f"loss must be even and within 0..{2 * self.design.tm_cups}, got {loss_value}"
            )
        return loss_value // 2 + 1


def loss_class_table(design: ExperimentDesign) -> LossClassTable:
    n = design.tm_cups
    m = design.mt_cups
    successes = tuple(n - k + 1 for k in range(1, n + 2))
    multiplicities = tuple(binomial(n, b) * binomial(m, n - b) for b in successes)
    losses = tuple(2 * (n - b) for b in successes)
    return LossClassTable(
        design=design,
        successes=successes,
        multiplicities=multiplicities,
        losses=losses,
        total=design.space_size,
    )


def loss(x: Assignment, y: Assignment) -> int:
    """Number of cups labelled differently by the two assignments."""
    if x.design != y.design:
        raise DesignError("assignments come from different designs")
    return (x.bits ^ y.bits).bit_count()


def relabel(x: Assignment) -> Assignment:
    """Swap both labels everywhere; only closed for balanced designs."""
    design = x.design
    if 2 * design.tm_cups != design.cups:
        raise DesignError(
            "relabelling leaves the answer space unless exactly half the cups are TM"
        )
    full = (1 << design.cups) - 1
    return Assignment(design, x.bits ^ full)


def enumerate_assignments(design: ExperimentDesign) -> Iterator[Assignment]:
    """Every admissible assignment once, in lexicographic label order.

    Iterating combinations of the zero (MT) positions in lexicographic
    order yields label vectors in ascending lexicographic order.
    """
    if design.space_size > ENUMERATION_LIMIT:
        raise EnumerationGuardError(
            f"space size {design.space_size} exceeds enumeration limit {ENUMERATION_LIMIT}"
        )
    full = (1 << design.cups) - 1
    for zeros in combinations(range(design.cups), design.mt_cups):
        bits = full
        for z in zeros:
            bits ^= 1 << z
        yield Assignment(design, bits)
