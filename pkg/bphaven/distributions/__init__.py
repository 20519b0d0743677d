"""
bphaven.distributions

Probability distributions used by the models and the simulation study.
"""

from .bivariate_poisson import (
    BPParams,
    bp_log_pmf,
    bp_log_pmf_from_log_rates,
    bp_moments,
    bp_sample,
    bp_sample_many,
    log_factorial,
    poisson_log_pmf,
)
from .densities import inverse_gamma_log_pdf, normal_log_pdf, normal_log_pdf_terms
from .truncated_normal import sample_truncated_normal

__all__ = [
    "BPParams",
    "bp_log_pmf",
    "bp_log_pmf_from_log_rates",
    "bp_moments",
    "bp_sample",
    "bp_sample_many",
    "log_factorial",
    "poisson_log_pmf",
    "inverse_gamma_log_pdf",
    "normal_log_pdf",
    "normal_log_pdf_terms",
    "sample_truncated_normal",
]
