"""Clausen 3F2 convolution operator and membership certificates."""

from .certificates import (
    Certificate,
    Precondition,
    TheoremId,
    Verdict,
    check_direct,
    check_from_R_beta,
    check_from_S,
    cross_validate,
    evaluate,
    parse_theorem,
)
from .errors import DomainError, NormalizationError, PoleProximityError, UnsupportedTheoremError
from .lemma import driver_johnston_rhs, lemma4_closed_forms, lemma_sum_brute, lemma_sum_closed
from .operator import (
    ClassKind,
    ClassSpec,
    CoefficientSeries,
    OperatorParams,
    SourceKind,
    SourceSpec,
    apply_operator,
    class_budget,
    coefficient_bound,
    hyper_coefficient,
    hyper_coefficients,
    worst_case_T,
)
from .series import DEFAULT_CONFIG, EvalConfig, SeriesValue
from .specfun import (
    clausen_3f2_at_one,
    gamma_prefactor,
    gauss_2f1_at_minus_one,
    log_gamma,
    pochhammer,
)

__version__ = "0.1.0"
