"""
bphaven.model

League models for paired count outcomes: specifications, priors, design matrices and
the log-posterior.
"""

from .design import Design, build_design
from .empirical_bayes import empirical_bayes_priors
from .params import ParamLayout, ParamVector
from .posterior import BPPosterior, log_likelihood, log_posterior, log_prior, match_log_likelihood
from .spec import (
    CovarianceMode,
    InverseGammaPrior,
    ModelSpec,
    NormalPrior,
    Outcome,
    PriorSpec,
    default_priors,
    gamma_prior_for,
)

__all__ = [
    "BPPosterior",
    "CovarianceMode",
    "Design",
    "InverseGammaPrior",
    "ModelSpec",
    "NormalPrior",
    "Outcome",
    "ParamLayout",
    "ParamVector",
    "PriorSpec",
    "build_design",
    "default_priors",
    "empirical_bayes_priors",
    "gamma_prior_for",
    "log_likelihood",
    "log_posterior",
    "log_prior",
    "match_log_likelihood",
]
