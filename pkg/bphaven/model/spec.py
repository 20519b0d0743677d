"""
spec.py

Model specifications and prior blocks.
"""

from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Dict, Optional, Tuple

from ..errors import ConfigurationError
from .config import (
    EFFECT_FAMILIES,
    GAMMA_PRIOR_VARIANCE,
    HA_PRIOR_MEAN,
    HA_PRIOR_VARIANCE,
    MU_PRIOR_MEAN,
    MU_PRIOR_VARIANCE,
    SCALE_NAMES,
    SIGMA_PRIOR_RATE,
    SIGMA_PRIOR_SHAPE,
)


class Outcome(str, Enum):
    GOALS = "goals"
    YELLOWS = "yellows"

    def __str__(self):
        return self.value


class CovarianceMode(str, Enum):
    ZERO = "zero"
    FREE = "free"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ModelSpec:
    """
    One league model.

    ``restart_date=None`` gives the baseline model with a single home advantage T;
    otherwise matches on or after the restart date use T_prime instead of T.
    """

    outcome: Outcome
    covariance_mode: CovarianceMode
    league_id: str
    seasons: Tuple[str, ...]
    restart_date: Optional[date] = None

    def __post_init__(self):
        object.__setattr__(self, "outcome", Outcome(self.outcome))
        object.__setattr__(self, "covariance_mode", CovarianceMode(self.covariance_mode))
        object.__setattr__(self, "seasons", tuple(self.seasons))
        if not self.seasons:
            raise ConfigurationError("a model needs at least one season")
        if len(set(self.seasons)) != len(self.seasons):
            raise ConfigurationError(f"duplicate seasons in {self.seasons}")

    @property
    def families(self):
        return EFFECT_FAMILIES[self.outcome.value]

    @property
    def scale_names(self):
        return tuple(SCALE_NAMES[f] for f in self.families)

    @property
    def has_post(self):
        return self.restart_date is not None

    @property
    def has_gamma(self):
        return self.covariance_mode is CovarianceMode.FREE


@dataclass(frozen=True)
class NormalPrior:
    mean: float = 0.0
    variance: float = 1.0

    def __post_init__(self):
        if not self.variance > 0:
            raise ConfigurationError(f"normal prior variance must be > 0, got {self.variance}")


@dataclass(frozen=True)
class InverseGammaPrior:
    shape: float = SIGMA_PRIOR_SHAPE
    rate: float = SIGMA_PRIOR_RATE

    def __post_init__(self):
        if not (self.shape > 0 and self.rate > 0):
            raise ConfigurationError(f"inverse-gamma shape and rate must be > 0, got {self}")


def _default_sigma_priors():
    return {name: InverseGammaPrior() for name in SCALE_NAMES.values()}


@dataclass(frozen=True)
class PriorSpec:
    mu_prior: NormalPrior = NormalPrior(MU_PRIOR_MEAN, MU_PRIOR_VARIANCE)
    T_prior: NormalPrior = NormalPrior(HA_PRIOR_MEAN, HA_PRIOR_VARIANCE)
    T_prime_prior: NormalPrior = NormalPrior(HA_PRIOR_MEAN, HA_PRIOR_VARIANCE)
    sigma_priors: Dict[str, InverseGammaPrior] = field(default_factory=_default_sigma_priors)
    gamma_prior: Optional[NormalPrior] = None

    def to_dict(self):
        return {
            "mu_prior": vars(self.mu_prior),
            "T_prior": vars(self.T_prior),
            "T_prime_prior": vars(self.T_prime_prior),
            "sigma_priors": {k: vars(v) for k, v in sorted(self.sigma_priors.items())},
            "gamma_prior": vars(self.gamma_prior) if self.gamma_prior else None,
        }


def gamma_prior_for(outcome):
    """N(0, 1/2) for goals, N(0, 2) for yellow cards."""
    return NormalPrior(0.0, GAMMA_PRIOR_VARIANCE[Outcome(outcome).value])


def default_priors(spec):
    """Non-informative priors; adds the gamma prior when lambda3 is free."""
    gamma = gamma_prior_for(spec.outcome) if spec.has_gamma else None
    return PriorSpec(gamma_prior=gamma)
