"""Benford's law through the Laplace transform.

Exact digit probabilities for parametric densities, the split of each
probability into the Benford term plus an error term, L1 bounds on that
error, a calculus of completely monotone densities, and empirical
conformity checks for data files.
"""

__version__ = "0.1.0"

from .cm import CmExpr, CmRuleError, CmVerdict, build, cm_catalog, normalize, numeric_cm_check
from .conformity import Classification, ConformityReport, analyze, classify, extract_first_digit
from .digits import (
    DigitSpec,
    SpectrumProfile,
    benford_term,
    delta_extrema,
    delta_max_abs,
    delta_tilde,
    dif_eval,
    h_tilde,
    hill_prob,
    period_mean,
    second_digit_prob,
)
from .distributions import (
    CompletelyMonotone,
    Exponential,
    LogNormal,
    LogUniform,
    Normal,
    Tabulated,
    UniformFromOne,
    cdf_eval,
    digit_prob_oracle,
    load_tabulated,
    pdf_eval,
    sample,
    scale_pdf,
    transform_pdf,
)
from .errors import AccuracyWarning, DomainError, NumericError, StateError
from .experiments import run_experiment
from .kernels import BACKEND
from .laplace import (
    error_bound,
    f_tilde_profile,
    invert,
    l1_norm,
    route_difference,
    stehfest_weights,
    total_error,
)

__all__ = [
    "__version__",
    "AccuracyWarning",
    "analyze",
    "BACKEND",
    "benford_term",
    "build",
    "cdf_eval",
    "Classification",
    "classify",
    "cm_catalog",
    "CmExpr",
    "CmRuleError",
    "CmVerdict",
    "CompletelyMonotone",
    "ConformityReport",
    "delta_extrema",
    "delta_max_abs",
    "delta_tilde",
    "dif_eval",
    "digit_prob_oracle",
    "DigitSpec",
    "DomainError",
    "error_bound",
    "Exponential",
    "extract_first_digit",
    "f_tilde_profile",
    "h_tilde",
    "hill_prob",
    "invert",
    "l1_norm",
    "load_tabulated",
    "LogNormal",
    "LogUniform",
    "Normal",
    "normalize",
    "numeric_cm_check",
    "NumericError",
    "pdf_eval",
    "period_mean",
    "route_difference",
    "run_experiment",
    "sample",
    "scale_pdf",
    "second_digit_prob",
    "SpectrumProfile",
    "StateError",
    "stehfest_weights",
    "Tabulated",
    "total_error",
    "transform_pdf",
    "UniformFromOne",
]
