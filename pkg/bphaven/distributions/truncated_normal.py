"""
truncated_normal.py

Inverse-CDF sampling of normals truncated to [lower, upper].
"""

import numpy as np
from scipy.special import ndtr, ndtri


def sample_truncated_normal(mean, sd, lower, rng, upper=np.inf):
    """
    Draw N(mean, sd^2) restricted to [lower, upper], one draw per element of ``mean``.

    Uses u ~ U(0, 1) mapped through the normal quantile function between the cdf
    values of the bounds. When the lower bound sits above the mean the draw is taken
    from the reflected upper tail so the cdf differences keep their precision.
    """
    mean = np.asarray(mean, dtype=float)
    a = (lower - mean) / sd
    b = (upper - mean) / sd
    u = rng.random(mean.shape)

    upper_tail = a > 0
    # lower-tail form: z = Phi^-1(Phi(a) + u (Phi(b) - Phi(a)))
    fa, fb = ndtr(a), ndtr(b)
    z_lower = ndtri(fa + u * (fb - fa))
    # reflected form: z = -Phi^-1(Phi(-a) - u (Phi(-a) - Phi(-b)))
    ga, gb = ndtr(-a), ndtr(-b)
    z_upper = -ndtri(ga - u * (ga - gb))

    z = np.where(upper_tail, z_upper, z_lower)
    z = np.clip(z, a, b)
    return mean + sd * z
