"""
estimators.py

Home-advantage estimators compared in the simulation study. Every estimator returns
home advantage on the goal-difference scale.
"""

import math

import numpy as np
from scipy.linalg import qr, solve_triangular

from ..distributions import inverse_gamma_log_pdf, normal_log_pdf
from ..errors import EstimationError
from ..model import BPPosterior, CovarianceMode, ModelSpec, Outcome, build_design
from ..sampler import Block, ChainConfig, Target, run_chains
from .config import (
    PAIRED_ALPHA_PRIOR_VARIANCE,
    PAIRED_SIGMA_RATE,
    PAIRED_SIGMA_SHAPE,
    SIM_LEAGUE_ID,
    SIM_SEASON_ID,
)


def fixed_effects_design(season):
    """Intercept, then home dummies and away dummies of teams 1..n-1 (team 0 is the reference)."""
    n, k = season.n_games, season.n_teams
    X = np.zeros((n, 2 * k - 1))
    X[:, 0] = 1.0
    rows = np.arange(n)
    home, away = season.home, season.away
    X[rows[home > 0], home[home > 0]] = 1.0
    X[rows[away > 0], k - 1 + away[away > 0]] = 1.0
    return X


def least_squares(X, y, tol=1e-10):
    """
    Least-squares coefficients through an economic QR factorisation.

    Raises:
        EstimationError: X has deficient column rank
    """
    if X.shape[0] < X.shape[1]:
        raise EstimationError(f"design of shape {X.shape} has more columns than rows")
    Q, R = qr(X, mode="economic")
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag.min() <= tol * diag.max():
        raise EstimationError(f"design of shape {X.shape} is rank deficient")
    return solve_triangular(R, Q.T @ y)


def fit_ols_fixed_effects(season):
    """Intercept of goal difference regressed on home and away team dummies."""
    X = fixed_effects_design(season)
    y = season.goal_difference.astype(float)
    return float(least_squares(X, y)[0])


def _chain_config(seed, chains):
    return ChainConfig.from_profile("simulation", seed, **(chains or {}))


class PairedComparison:
    """
    Goal difference D = alpha + theta_home - theta_away + e with
    alpha ~ N(0, 100), theta ~ N(0, sigma_team^2), e ~ N(0, sigma^2) and
    inverse-gamma(1, 1) priors on both scales (sampled on the log scale).
    """

    def __init__(self, season):
        self.y = season.goal_difference.astype(float)
        self.home = season.home
        self.away = season.away
        self.n_teams = season.n_teams
        self.names = (
            ["alpha"]
            + [f"theta[{t}]" for t in range(self.n_teams)]
            + ["sigma_team", "sigma"]
        )

    def log_density(self, x):
        alpha = x[0]
        theta = x[1:1 + self.n_teams]
        log_sigma_team, log_sigma = x[-2], x[-1]
        sigma_team, sigma = math.exp(log_sigma_team), math.exp(log_sigma)
        resid = self.y - (alpha + theta[self.home] - theta[self.away])
        return (
            normal_log_pdf(resid, 0.0, sigma**2)
            + normal_log_pdf(alpha, 0.0, PAIRED_ALPHA_PRIOR_VARIANCE)
            + normal_log_pdf(theta, 0.0, sigma_team**2)
            + inverse_gamma_log_pdf(sigma_team, PAIRED_SIGMA_SHAPE, PAIRED_SIGMA_RATE)
            + inverse_gamma_log_pdf(sigma, PAIRED_SIGMA_SHAPE, PAIRED_SIGMA_RATE)
            + log_sigma_team
            + log_sigma
        )

    def transform(self, x):
        out = np.array(x, dtype=float, copy=True)
        out[-2:] = np.exp(out[-2:])
        return out

    def target(self):
        dim = len(self.names)
        return Target(
            log_density=self.log_density,
            names=self.names,
            blocks=[
                Block("alpha", np.array([0])),
                Block("theta", np.arange(1, 1 + self.n_teams)),
                Block("scales", np.array([dim - 2, dim - 1])),
            ],
            transform=self.transform,
        )


def fit_paired_comparison(season, seed=0, chains=None):
    """Posterior mean of alpha in the paired-comparison model."""
    draws = run_chains(PairedComparison(season).target(), _chain_config(seed, chains))
    return float(draws.pooled("alpha").mean())


def fit_bvp_model(season, seed=0, chains=None):
    """
    Fit the single-home-advantage goals model with lambda3 = 0 and map the posterior
    means to exp(mu + T) - exp(mu).
    """
    spec = ModelSpec(Outcome.GOALS, CovarianceMode.ZERO, SIM_LEAGUE_ID, (SIM_SEASON_ID,))
    design = build_design(season.to_matches(), spec)
    draws = run_chains(BPPosterior(design).target(), _chain_config(seed, chains))
    mu = float(draws.pooled(f"mu[{SIM_SEASON_ID}]").mean())
    T = float(draws.pooled("T").mean())
    return math.exp(mu + T) - math.exp(mu)
