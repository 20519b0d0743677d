"""
bphaven

Bayesian bivariate Poisson models of home advantage in paired match counts, with the
estimator-bias simulation study.
"""

__version__ = "0.1.0"

from .distributions import BPParams, bp_log_pmf, bp_moments, bp_sample
from .model import ModelSpec, build_design, empirical_bayes_priors, log_posterior
from .sampler import ChainConfig, PosteriorDraws, run_chains

__all__ = [
    "__version__",
    "BPParams",
    "ChainConfig",
    "ModelSpec",
    "PosteriorDraws",
    "bp_log_pmf",
    "bp_moments",
    "bp_sample",
    "build_design",
    "empirical_bayes_priors",
    "log_posterior",
    "run_chains",
]
