"""Entropy-constrained expected-misclassification minimization.

Among all answer distributions with a prescribed entropy h, the one that
minimizes expected misclassification loss is an exponential-family (logit)
distribution over loss classes,

    p_k = exp(beta * b_k) / sum_l a_l * exp(beta * b_l),

where b_k is the class success count, a_k its multiplicity, and the inverse
temperature beta >= 0 is pinned down by the entropy constraint. beta = 0 is
the uniform distribution (entropy log of the space size); entropy falls
strictly and continuously as beta grows, vanishing in the limit, so the
constraint is solved by bracketed bisection. beta is the reciprocal of the
entropy constraint's multiplier, which keeps the uniform endpoint at an
ordinary interior point of the solver's domain.

Everything is evaluated in the log domain after subtracting the maximal
score, so no finite beta can overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .combinatorics import LossClassTable
from .entropy import ClassDistribution, class_entropy
from .errors import ConvergenceError, InfeasibleEntropyError

DEFAULT_TOL = 1e-10
ENTROPY_FLOOR = 1e-9
_BISECTION_WIDTH = 1e-13
_MAX_ITERATIONS = 200
_UNDERFLOW_EXPONENT = 800.0  # exp(-800) underflows to exactly 0.0

MINIMIZE_LOSS = "minimize-loss"
MAXIMIZE_LOSS = "maximize-loss"


@dataclass(frozen=True)
class GibbsSolution:
    """An entropy-constrained minimizer together with its summary statistics.

    ``entropy`` is the achieved value (within solver tolerance of the
    request); ``dirac_limit`` marks requests at or below the feasibility
    floor that were answered with the concentration limit instead of a
    solved temperature.
    """

    dist: ClassDistribution
    beta: float
    entropy: float
    expected_loss: float
    expected_successes: float
    log_normalizer: float
    dirac_limit: bool = False


# -- generic weighted-softmax core, shared with the simplex path tracer --


def _log_probabilities(weights, scores, beta):
    """Log per-element probabilities and log normalizer, max-shifted."""
    shift = max(scores)
    exponents = [math.log(w) + beta * (s - shift) for w, s in zip(weights, scores)]
    peak = max(exponents)
    log_sum = peak + math.log(math.fsum(math.exp(e - peak) for e in exponents))
    log_p = [beta * (s - shift) - log_sum for s in scores]
    return log_p, log_sum + beta * shift


def _probabilities(weights, scores, beta):
    if beta == 0.0:
        uniform = 1.0 / sum(weights)
        return [uniform] * len(scores)
    log_p, _ = _log_probabilities(weights, scores, beta)
    return [math.exp(lp) for lp in log_p]


def _entropy_at(weights, scores, beta):
    if beta == 0.0:
        return math.log(sum(weights))
    log_p, _ = _log_probabilities(weights, scores, beta)
    return -math.fsum(w * math.exp(lp) * lp for w, lp in zip(weights, log_p))


def _entropy_floor_mass(weights, scores):
    """Total weight tied at the maximal score; its log is the entropy infimum."""
    top = max(scores)
    return sum(w for w, s in zip(weights, scores) if s == top)


def _limit_beta(scores):
    """A beta at which every non-maximal score underflows to exact zero mass."""
    top = max(scores)
    gaps = [top - s for s in scores if s != top]
    if not gaps:
        return 0.0
    return _UNDERFLOW_EXPONENT / min(gaps)


def _solve_beta(weights, scores, h, tol):
    h_max = math.log(sum(weights))
    h_inf = math.log(_entropy_floor_mass(weights, scores))
    if h > h_max + tol:
        raise InfeasibleEntropyError(f"entropy {h} exceeds the maximum {h_max}")
    if h >= h_max:
        return 0.0
    if h <= h_inf + ENTROPY_FLOOR:
        raise InfeasibleEntropyError(
            f"entropy {h} is at or below the feasible floor {h_inf + ENTROPY_FLOOR}"
        )
    iterations = 0
    lo, hi = 0.0, 1.0
    while _entropy_at(weights, scores, hi) > h:
        lo, hi = hi, 2.0 * hi
        iterations += 1
        if iterations > _MAX_ITERATIONS:
            raise ConvergenceError(f"could not bracket entropy level {h}")
    mid = 0.5 * (lo + hi)
    value = _entropy_at(weights, scores, mid)
    while abs(value - h) > tol and hi - lo > _BISECTION_WIDTH:
        if value > h:
            lo = mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
        value = _entropy_at(weights, scores, mid)
        iterations += 1
        if iterations > _MAX_ITERATIONS:
            raise ConvergenceError(
                f"no convergence after {_MAX_ITERATIONS} iterations at entropy {h}"
            )
    if abs(value - h) > tol:
        raise ConvergenceError(
            f"bisection interval collapsed with entropy residual {value - h:.3e}"
        )
    return mid


# -- loss-class API --


def _oriented_scores(table: LossClassTable, orientation: str):
    if orientation == MINIMIZE_LOSS:
        return [float(b) for b in table.successes]
    if orientation == MAXIMIZE_LOSS:
        return [-float(b) for b in table.successes]
    raise ValueError(f"orientation must be {MINIMIZE_LOSS!r} or {MAXIMIZE_LOSS!r}, got {orientation!r}")


def _check_beta(beta: float):
    if not math.isfinite(beta) or beta < 0.0:
        raise ValueError(f"inverse temperature must be finite and non-negative, got {beta}")


def gibbs_distribution(
    table: LossClassTable, beta: float, orientation: str = MINIMIZE_LOSS
) -> ClassDistribution:
    """The logit family member at inverse temperature ``beta``.

    Exactly uniform at beta = 0; strictly decreasing in the class index for
    beta > 0 under the default orientation.
    """
    _check_beta(beta)
    scores = _oriented_scores(table, orientation)
    p = _probabilities(table.multiplicities, scores, beta)
    return ClassDistribution(table, tuple(p))


def entropy_at_beta(
    table: LossClassTable, beta: float, orientation: str = MINIMIZE_LOSS
) -> float:
    """Achieved entropy as a function of beta; strictly decreasing."""
    _check_beta(beta)
    return _entropy_at(table.multiplicities, _oriented_scores(table, orientation), beta)


def solve_beta_for_entropy(
    table: LossClassTable,
    h: float,
    tol: float = DEFAULT_TOL,
    orientation: str = MINIMIZE_LOSS,
) -> float:
    """Invert the entropy map: the beta whose distribution has entropy h.

    Returns 0.0 exactly at the maximal entropy. Bracketed bisection (initial
    bracket [0, 1], right endpoint doubled until the entropy falls below h)
    runs to an entropy residual of ``tol`` or an interval width of 1e-13,
    whichever comes first.
    """
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return _solve_beta(table.multiplicities, _oriented_scores(table, orientation), h, tol)


def optimal_distribution(
    table: LossClassTable,
    h: float,
    tol: float = DEFAULT_TOL,
    orientation: str = MINIMIZE_LOSS,
) -> GibbsSolution:
    """The entropy-h expected-loss minimizer with its summary statistics.

    Requests at or below the feasibility floor (1e-9 nats above the
    infimum) return the concentration limit flagged ``dirac_limit`` rather
    than iterating on an effectively degenerate problem.
    """
    weights = table.multiplicities
    scores = _oriented_scores(table, orientation)
    h_inf = math.log(_entropy_floor_mass(weights, scores))
    if h <= h_inf:
        raise InfeasibleEntropyError(f"entropy {h} is not achievable (infimum {h_inf})")
    if h <= h_inf + ENTROPY_FLOOR:
        beta = _limit_beta(scores)
        dirac_limit = True
    else:
        beta = _solve_beta(weights, scores, h, tol)
        dirac_limit = False
    if beta == 0.0:
        p = [1.0 / table.total] * table.class_count
        log_normalizer = math.log(table.total)
    else:
        log_p, log_normalizer = _log_probabilities(weights, scores, beta)
        p = [math.exp(lp) for lp in log_p]
    dist = ClassDistribution(table, tuple(p))
    expected_successes = math.fsum(
        a * pk * b for a, pk, b in zip(weights, p, table.successes)
    )
    expected_loss = math.fsum(a * pk * l for a, pk, l in zip(weights, p, table.losses))
    return GibbsSolution(
        dist=dist,
        beta=beta,
        entropy=class_entropy(dist),
        expected_loss=expected_loss,
        expected_successes=expected_successes,
        log_normalizer=log_normalizer,
        dirac_limit=dirac_limit,
    )


def mean_success_sensitivity(table: LossClassTable, beta: float) -> tuple[float, ...]:
    """Per-class derivative of the probability in the constraint multiplier.

    With mu = 1/beta, the derivative is (p_k / mu^2) * (E[b] - b_k):
    negative for classes scoring above the current mean success count and
    positive below it. Undefined at beta = 0, where mu is infinite.
    """
    _check_beta(beta)
    if beta == 0.0:
        raise ValueError("sensitivity is undefined at beta = 0 (infinite multiplier)")
    scores = [float(b) for b in table.successes]
    p = _probabilities(table.multiplicities, scores, beta)
    mean_b = math.fsum(a * pk * b for a, pk, b in zip(table.multiplicities, p, scores))
    mu = 1.0 / beta
    return tuple(pk / (mu * mu) * (mean_b - bk) for pk, bk in zip(p, scores))


def _pair_spread(weights, scores, beta):
    shift = max(scores)
    w = [wt * math.exp(beta * (s - shift)) for wt, s in zip(weights, scores)]
    total = 0.0
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            gap = scores[i] - scores[j]
            total += w[i] * w[j] * gap * gap
    return total


def fprime_sign_certificate(table: LossClassTable, beta: float) -> float:
    """Shift-stabilized Cauchy-Schwarz gap certifying the entropy map's slope.

    Equals [sum a b^2 e^(beta b)][sum a e^(beta b)] - [sum a b e^(beta b)]^2
    rescaled by exp(-2 beta b_max), evaluated as the equivalent sum of
    pairwise terms w_i w_j (b_i - b_j)^2 so every contribution is
    non-negative and cancellation cannot flip the sign.
    """
    _check_beta(beta)
    if beta == 0.0:
        raise ValueError("certificate is defined for beta > 0")
    return _pair_spread(
        [float(a) for a in table.multiplicities],
        [float(b) for b in table.successes],
        beta,
    )
