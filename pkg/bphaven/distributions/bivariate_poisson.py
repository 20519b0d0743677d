"""
bivariate_poisson.py

The bivariate Poisson distribution BP(lambda1, lambda2, lambda3).

(Y1, Y2) is built by trivariate reduction: Y1 = X1 + X3 and Y2 = X2 + X3 with
independent X1 ~ Pois(lambda1), X2 ~ Pois(lambda2), X3 ~ Pois(lambda3). The marginal
means are lambda1 + lambda3 and lambda2 + lambda3, the covariance is lambda3.
"""

from dataclasses import dataclass
import math
import numbers

import numpy as np
from scipy.special import gammaln, logsumexp

from ..errors import DomainError

LOG_FACTORIAL_TABLE_SIZE = 256
_LOG_FACTORIALS = gammaln(np.arange(LOG_FACTORIAL_TABLE_SIZE + 1, dtype=float) + 1.0)


def log_factorial(n):
    """log(n!) from the precomputed table, log-gamma beyond it."""
    n = np.asarray(n)
    if n.size and n.max() <= LOG_FACTORIAL_TABLE_SIZE:
        out = _LOG_FACTORIALS[n]
    else:
        out = gammaln(n + 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BPParams:
    lambda1: float
    lambda2: float
    lambda3: float = 0.0

    def __post_init__(self):
        values = (self.lambda1, self.lambda2, self.lambda3)
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"bivariate Poisson parameters must be finite, got {values}")
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise DomainError(f"lambda1 and lambda2 must be > 0, got {values}")
        if self.lambda3 < 0:
            raise DomainError(f"lambda3 must be >= 0, got {self.lambda3}")


def _check_count(y, name):
    if isinstance(y, bool) or not isinstance(y, numbers.Integral) or y < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {y!r}")
    return int(y)


def bp_log_pmf(y1, y2, p):
    """
    Exact log-probability of (y1, y2) under BP(p.lambda1, p.lambda2, p.lambda3).

    P(y1, y2) = exp(-(l1 + l2 + l3)) * l1^y1/y1! * l2^y2/y2!
                * sum_{k=0}^{min(y1,y2)} C(y1,k) C(y2,k) k! (l3 / (l1 l2))^k

    The inner sum is accumulated in log space. With lambda3 == 0 the sum is exactly 1
    and the result is the product of two Poisson pmfs.
    """
    y1 = _check_count(y1, "y1")
    y2 = _check_count(y2, "y2")
    l1, l2, l3 = p.lambda1, p.lambda2, p.lambda3

    base = (
        -(l1 + l2 + l3)
        + y1 * math.log(l1) - log_factorial(y1)
        + y2 * math.log(l2) - log_factorial(y2)
    )
    if l3 == 0.0 or min(y1, y2) == 0:
        return base

    k = np.arange(min(y1, y2) + 1)
    log_terms = (
        log_factorial(y1) - log_factorial(y1 - k) - log_factorial(k)
        + log_factorial(y2) - log_factorial(y2 - k)
        + k * (math.log(l3) - math.log(l1) - math.log(l2))
    )
    return base + float(logsumexp(log_terms))


def poisson_log_pmf(y, log_rate):
    """Elementwise log Pois(y; exp(log_rate))."""
    y = np.asarray(y)
    log_rate = np.asarray(log_rate, dtype=float)
    return y * log_rate - np.exp(log_rate) - log_factorial(y)


def bp_log_pmf_from_log_rates(y1, y2, log_lambda1, log_lambda2, log_lambda3=None):
    """
    Vectorised bivariate Poisson log-pmf over many matches.

    Rates enter on the log scale (linear predictors of the regression models).
    ``log_lambda3=None`` means lambda3 = 0 exactly and returns the independence product.
    """
    y1 = np.asarray(y1, dtype=np.int64)
    y2 = np.asarray(y2, dtype=np.int64)
    out = poisson_log_pmf(y1, log_lambda1) + poisson_log_pmf(y2, log_lambda2)
    if log_lambda3 is None:
        return out

    log_lambda3 = np.broadcast_to(np.asarray(log_lambda3, dtype=float), out.shape)
    out = out - np.exp(log_lambda3)

    m = np.minimum(y1, y2)
    k_max = int(m.max()) if m.size else 0
    if k_max == 0:
        return out

    k = np.arange(k_max + 1)
    log_ratio = log_lambda3 - np.asarray(log_lambda1) - np.asarray(log_lambda2)
    valid = k[None, :] <= m[:, None]
    # clip keeps the table lookup in range; invalid entries are masked below
    r1 = np.clip(y1[:, None] - k[None, :], 0, None)
    r2 = np.clip(y2[:, None] - k[None, :], 0, None)
    log_terms = (
        log_factorial(y1)[:, None] - log_factorial(r1) - log_factorial(k)[None, :]
        + log_factorial(y2)[:, None] - log_factorial(r2)
        + k[None, :] * log_ratio[:, None]
    )
    log_terms = np.where(valid, log_terms, -np.inf)
    return out + logsumexp(log_terms, axis=1)


def bp_sample(p, rng, size=None):
    """
    Draw from BP(p) by trivariate reduction.

    Returns a pair of ints when ``size`` is None, otherwise a pair of arrays.
    """
    x1 = rng.poisson(p.lambda1, size)
    x2 = rng.poisson(p.lambda2, size)
    x3 = rng.poisson(p.lambda3, size)
    y1, y2 = x1 + x3, x2 + x3
    if size is None:
        return int(y1), int(y2)
    return y1, y2


def bp_sample_many(lambda1, lambda2, rng, lambda3=0.0):
    """Vectorised trivariate reduction for per-match rate arrays."""
    lambda1 = np.asarray(lambda1, dtype=float)
    lambda2 = np.asarray(lambda2, dtype=float)
    if np.any(lambda1 <= 0) or np.any(lambda2 <= 0) or np.any(np.asarray(lambda3) < 0):
        raise DomainError("bivariate Poisson rates out of domain")
    x1 = rng.poisson(lambda1)
    x2 = rng.poisson(lambda2)
    x3 = rng.poisson(np.broadcast_to(lambda3, lambda1.shape))
    return x1 + x3, x2 + x3


def bp_moments(p):
    """(mean1, mean2, cov) = (lambda1 + lambda3, lambda2 + lambda3, lambda3)."""
    return p.lambda1 + p.lambda3, p.lambda2 + p.lambda3, p.lambda3
