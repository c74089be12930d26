"""Exact combinatorics, entropy-constrained answer models, exact tests and
Monte Carlo power analysis for fixed-margin cup-assignment designs."""

__version__ = "0.1.0"

from .combinatorics import (
    Assignment,
    ExperimentDesign,
    LossClassTable,
    binomial,
    enumerate_assignments,
    loss,
    loss_class_table,
    relabel,
)
from .dominance import (
    FosdVerdict,
    LossCdf,
    NullComparison,
    class_expectation,
    classify_vs_null,
    fosd_check,
    loss_cdf,
)
from .entropy import ClassDistribution, class_entropy, max_entropy, shannon_entropy
from .errors import (
    CombinatoricsOverflowError,
    ConvergenceError,
    DesignError,
    EnumerationGuardError,
    InfeasibleEntropyError,
    TeaTestError,
)
from .exact_tests import (
    ExactTestReport,
    PValue,
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
from .figures import (
    OptimalPath,
    OptimalPathPoint,
    SimplexGridPoint,
    entropy_grid,
    optimal_path,
)
from .gibbs import (
    GibbsSolution,
    entropy_at_beta,
    fprime_sign_certificate,
    gibbs_distribution,
    mean_success_sensitivity,
    optimal_distribution,
    solve_beta_for_entropy,
)
from .rng import SplitMix64, mix64, stream_for
from .simulate import SimConfig, SimReport, run_simulation, sample_answer, sample_truth
