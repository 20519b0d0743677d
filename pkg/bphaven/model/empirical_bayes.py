"""
empirical_bayes.py

Stage-2 priors for the lambda3-free fits, built from stage-1 posterior means.
"""

import math

from loguru import logger
import numpy as np

from ..errors import ConfigurationError
from .config import EB_SD_MULTIPLIER
from .spec import NormalPrior, Outcome, PriorSpec, gamma_prior_for


def _pooled_prior(values, label):
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        raise ConfigurationError(f"empirical-Bayes prior for {label} needs at least 2 leagues")
    if not np.all(np.isfinite(values)):
        raise ConfigurationError(f"non-finite stage-1 estimate of {label}")
    sd = float(np.std(values, ddof=1))
    if sd == 0.0 or not math.isfinite(sd):
        raise ConfigurationError(f"stage-1 estimates of {label} have zero spread; prior would be degenerate")
    return NormalPrior(float(np.mean(values)), (EB_SD_MULTIPLIER * sd) ** 2)


def empirical_bayes_priors(stage1, outcome=Outcome.GOALS):
    """
    Shared priors T ~ N(mean(T_hat), (3 sd(T_hat))^2) and likewise for T_prime.

    Parameters:
        stage1: mapping league_id -> (T_hat, T_prime_hat) posterior means
        outcome: selects the gamma prior variance

    Returns:
        dict league_id -> PriorSpec, the same PriorSpec for every league
    """
    leagues = sorted(stage1)
    T_prior = _pooled_prior([stage1[k][0] for k in leagues], "T")
    T_prime_prior = _pooled_prior([stage1[k][1] for k in leagues], "T_prime")
    logger.info(
        f"empirical-Bayes priors from {len(leagues)} leagues: "
        f"T ~ N({T_prior.mean:.4f}, {T_prior.variance:.4f}), "
        f"T_prime ~ N({T_prime_prior.mean:.4f}, {T_prime_prior.variance:.4f})"
    )
    priors = PriorSpec(
        T_prior=T_prior,
        T_prime_prior=T_prime_prior,
        gamma_prior=gamma_prior_for(outcome),
    )
    return {k: priors for k in leagues}
