"""
densities.py

Log densities used by the prior blocks. Normal priors are written N(mean, variance);
inverse-gamma priors use the shape-rate form, density proportional to
x^(-shape-1) exp(-rate/x).
"""

import numpy as np
from scipy.special import gammaln

_LOG_2PI = np.log(2.0 * np.pi)


def normal_log_pdf(x, mean=0.0, variance=1.0):
    """Sum of N(mean, variance) log densities over x; -inf when variance <= 0."""
    if np.any(np.asarray(variance) <= 0):
        return -np.inf
    x = np.asarray(x, dtype=float)
    return float(np.sum(normal_log_pdf_terms(x, mean, variance)))


def normal_log_pdf_terms(x, mean=0.0, variance=1.0):
    """Elementwise N(mean, variance) log densities."""
    x = np.asarray(x, dtype=float)
    return -0.5 * (_LOG_2PI + np.log(variance)) - 0.5 * (x - mean) ** 2 / variance


def inverse_gamma_log_pdf(x, shape=1.0, rate=1.0):
    """Inverse-gamma(shape, rate) log density; -inf outside x > 0."""
    x = float(x)
    if x <= 0:
        return -np.inf
    return shape * np.log(rate) - gammaln(shape) - (shape + 1.0) * np.log(x) - rate / x
