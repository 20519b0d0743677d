"""
posterior.py

Log-likelihood, log-prior and log-posterior of the league models, and the
BPPosterior target handed to the sampler.

Rates per match i in season s:
    goals:   log l1 = mu_s + HA_i + attack[home] + defend[away]
             log l2 = mu_s + attack[away] + defend[home]
    yellows: log l1 = mu_s + HA_i + team_card[home]
             log l2 = mu_s + team_card[away]
HA_i is T before the restart date and T_prime on or after it; log l3 = gamma when
lambda3 is free.
"""

import numpy as np

from ..distributions import (
    bp_log_pmf_from_log_rates,
    inverse_gamma_log_pdf,
    normal_log_pdf,
    normal_log_pdf_terms,
    poisson_log_pmf,
)
from ..errors import ConfigurationError, EvaluationError
from ..sampler.target import Block, Target
from .config import SCALE_NAMES
from .params import ParamLayout, ParamVector
from .spec import default_priors


def _log_rates(params, design):
    spec = design.spec
    base = params.mu[design.season_slot]
    ha = params.T
    if spec.has_post:
        ha = np.where(design.post, params.T_prime, params.T)
    if spec.outcome.value == "goals":
        log_l1 = base + ha + params.attack[design.home_slot] + params.defend[design.away_slot]
        log_l2 = base + params.attack[design.away_slot] + params.defend[design.home_slot]
    else:
        log_l1 = base + ha + params.team_card[design.home_slot]
        log_l2 = base + params.team_card[design.away_slot]
    log_l3 = params.gamma if spec.has_gamma else None
    return log_l1, log_l2, log_l3


def match_log_likelihood(params, design):
    """Per-match log-likelihood terms, in design order."""
    log_l1, log_l2, log_l3 = _log_rates(params, design)
    return bp_log_pmf_from_log_rates(design.y_home, design.y_away, log_l1, log_l2, log_l3)


def log_likelihood(params, design, spec=None):
    """
    Sum of bivariate Poisson log-pmfs over the design's matches.

    Raises:
        EvaluationError: a parameter is not finite
        DesignError: params are not shaped for the design
    """
    if spec is not None and spec != design.spec:
        raise ConfigurationError("design was built for a different model spec")
    params.check(design)
    if not params.all_finite():
        raise EvaluationError("log_likelihood called with a non-finite parameter")
    return float(np.sum(match_log_likelihood(params, design)))


def log_prior(params, priors, spec):
    """Sum of the prior log densities; -inf when a scale is not positive."""
    lp = normal_log_pdf(params.mu, priors.mu_prior.mean, priors.mu_prior.variance)
    lp += normal_log_pdf(params.T, priors.T_prior.mean, priors.T_prior.variance)
    if spec.has_post:
        lp += normal_log_pdf(params.T_prime, priors.T_prime_prior.mean, priors.T_prime_prior.variance)
    if spec.has_gamma:
        if priors.gamma_prior is None:
            raise ConfigurationError("lambda3 is free but the priors carry no gamma prior")
        lp += normal_log_pdf(params.gamma, priors.gamma_prior.mean, priors.gamma_prior.variance)

    for family in spec.families:
        sigma = params.scale(family)
        if not sigma > 0:
            return -np.inf
        scale_prior = priors.sigma_priors[SCALE_NAMES[family]]
        lp += normal_log_pdf(params.effect(family), 0.0, sigma**2)
        lp += inverse_gamma_log_pdf(sigma, scale_prior.shape, scale_prior.rate)
    return float(lp)


def log_posterior(params, design, spec, priors):
    lp = log_prior(params, priors, spec)
    if lp == -np.inf:
        return lp
    return log_likelihood(params, design, spec) + lp


class BPPosterior:
    """
    The posterior of one league model on the sampler's unconstrained scale.

    Scales are sampled as log(sigma); ``log_density`` adds the log-Jacobian so draws of
    sigma follow the posterior.
    """

    def __init__(self, design, priors=None):
        self.design = design
        self.spec = design.spec
        self.priors = priors if priors is not None else default_priors(self.spec)
        self.layout = ParamLayout(design)

    @property
    def names(self):
        return self.layout.names

    def log_density(self, theta):
        params = self.layout.unpack(theta)
        lp = log_prior(params, self.priors, self.spec)
        if lp == -np.inf:
            return lp
        log_jacobian = sum(np.log(getattr(params, name)) for name in self.spec.scale_names)
        return float(np.sum(match_log_likelihood(params, self.design))) + lp + log_jacobian

    def component_terms(self, theta, block):
        """Per-coordinate log-density terms of a separable block."""
        params = self.layout.unpack(theta)
        design = self.design
        if block.name == "mu":
            prior = self.priors.mu_prior
            ll = match_log_likelihood(params, design)
            return np.bincount(design.season_slot, weights=ll, minlength=design.n_seasons) + (
                normal_log_pdf_terms(params.mu, prior.mean, prior.variance)
            )

        family = block.name
        log_l1, log_l2, _ = _log_rates(params, design)
        ll_home = poisson_log_pmf(design.y_home, log_l1)
        ll_away = poisson_log_pmf(design.y_away, log_l2)
        if family == "defend":
            ll_home, ll_away = ll_away, ll_home
        n = design.n_slots
        terms = np.bincount(design.home_slot, weights=ll_home, minlength=n)
        terms += np.bincount(design.away_slot, weights=ll_away, minlength=n)
        return terms + normal_log_pdf_terms(params.effect(family), 0.0, params.scale(family) ** 2)

    def blocks(self):
        """
        Update blocks: mu per season, the home-advantage block, the effect families and
        the log-scales.

        Effect families are separable across team-seasons when lambda3 = 0; with
        lambda3 free each season's family vector moves as one block.
        """
        layout = self.layout
        spec = self.spec
        blocks = [Block("mu", layout.indices("mu"), separable=True)]
        ha = [layout.indices(n) for n in ("T", "T_prime", "gamma") if n in layout.slices]
        blocks.append(Block("ha", np.concatenate(ha)))
        for family in spec.families:
            index = layout.indices(family)
            if not spec.has_gamma:
                blocks.append(Block(family, index, separable=True))
                continue
            for s, season in enumerate(spec.seasons):
                blocks.append(Block(f"{family}[{season}]", index[self.design.slot_season == s]))
        blocks.append(
            Block("scales", np.concatenate([layout.indices(n) for n in spec.scale_names]))
        )
        return blocks

    def initial_point(self):
        """Location parameters at 0 and scales at 1."""
        return self.layout.pack(ParamVector.zeros(self.design))

    def target(self):
        return Target(
            log_density=self.log_density,
            names=self.layout.names,
            initial=self.initial_point(),
            blocks=self.blocks(),
            component_terms=self.component_terms,
            transform=self.layout.constrain,
            metadata={
                "league_id": self.spec.league_id,
                "outcome": str(self.spec.outcome),
                "covariance_mode": str(self.spec.covariance_mode),
            },
        )
