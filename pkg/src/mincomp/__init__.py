"""Minimum-complexity transductive classification at desk scale.

The package ships a tiny monotone machine with an exact program enumerator
approximating the universal prior, pluggable complexity estimators (the
enumerator and a Krichevsky-Trofimov adaptive coder), a classifier that
picks the simplest labeling consistent with the training data, and an exact
experiment harness for no-free-lunch checks, the simplicity-prior free
lunch, and the entropy/loss bounds.
"""

from .analysis import (
    BoundParams,
    FreeLunchResult,
    ILLUSTRATIVE,
    PriorTable,
    better_constant,
    correct_test_indicator,
    entropy,
    entropy_inequality_chain,
    expected_loss,
    free_lunch_experiment,
    indicator_code_rate,
    indicator_count_identities,
    loss_bound_km_features,
    loss_bound_log_size,
    mn_prior,
    nfl_expected_loss,
    point_mass_prior,
    small_theta_approx,
    uniform_prior,
)
from .classify import (
    BASELINE_KINDS,
    Completion,
    ExperimentReport,
    SearchStrategy,
    astar,
    baseline,
    evaluate,
    parse_strategy,
)
from .enumerator import MEstimate, MnTable, approx_km, approx_m, build_mn
from .errors import (
    DegenerateDenominatorError,
    DomainError,
    EmptySubsetError,
    EmptyTestSetError,
    ExhaustiveTooLargeError,
    InvalidBudgetError,
    InvalidThetaError,
    LengthMismatchError,
    MincompError,
    NoProgramFoundError,
    OutOfRangeError,
    TooLargeError,
)
from .estimators import (
    EstimatorSpec,
    conditional_complexity,
    enum_estimator,
    function_complexity,
    kt_code_length,
    kt_estimator,
    parse_estimator,
)
from .machine import ProgramRun, run_trm1
from .model import (
    Mask,
    Problem,
    Split,
    bernoulli_mask,
    first_bit_problem,
    load_mask,
    load_problem,
    loss,
    prefix_mask,
    save_mask,
    save_problem,
    split_from_mask,
)

__version__ = "0.1.0"
