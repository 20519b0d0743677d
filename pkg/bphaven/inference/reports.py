"""
reports.py

Home-advantage reports from posterior draws: decline probabilities, per-league tables,
the goals-per-game transformation and the joint goals / yellow-cards comparison.
"""

from dataclasses import asdict, dataclass
import math
import re

from loguru import logger
import numpy as np
import pandas as pd

from ..errors import DataError
from ..model.spec import Outcome
from ..sampler import convergence, ess_by_parameter
from ..sampler.config import RHAT_THRESHOLD
from .config import DECLINE_THRESHOLDS, QUADRANTS

_EFFECT_NAME = re.compile(r"^(attack|defend|team_card)\[(.+)\|(.+)\]$")


@dataclass(frozen=True)
class LeagueFitReport:
    league_id: str
    outcome: str
    T_hat: float = math.nan
    T_prime_hat: float = math.nan
    delta: float = math.nan
    pct_change: float = math.nan
    p_decline: float = math.nan
    max_r_hat: float = math.nan
    min_ess: float = math.nan
    converged: bool = False
    mu_bar: float = math.nan
    missing: bool = False

    def to_dict(self):
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data):
        return cls(**{k: (math.nan if v is None else v) for k, v in data.items()})


def prob_ha_decline(draws_T, draws_T_prime, outcome):
    """
    Posterior probability that home advantage declined after the restart.

    Goals: P(T_prime < T). Yellow cards: P(T_prime > T), since the home side's
    advantage is a negative T and a decline moves it up towards zero.
    Draws are paired by index.
    """
    draws_T = np.asarray(draws_T, dtype=float)
    draws_T_prime = np.asarray(draws_T_prime, dtype=float)
    if draws_T.shape != draws_T_prime.shape:
        raise ValueError(f"paired draws differ in length: {draws_T.shape} vs {draws_T_prime.shape}")
    if draws_T.size == 0:
        raise ValueError("no draws")
    if Outcome(outcome) is Outcome.GOALS:
        return float(np.mean(draws_T_prime < draws_T))
    return float(np.mean(draws_T_prime > draws_T))


def goal_scale_ha(mu, T):
    """Home advantage in goals per game for average teams: exp(mu + T) - exp(mu)."""
    return math.exp(mu + T) - math.exp(mu)


def pct_change(T_hat, T_prime_hat):
    """100 (T_prime - T) / |T|; NaN when T is exactly 0."""
    if T_hat == 0:
        return math.nan
    return 100.0 * (T_prime_hat - T_hat) / abs(T_hat)


def league_report(league_id, draws, outcome, threshold=RHAT_THRESHOLD):
    """LeagueFitReport of one fitted league; diagnostics run over every parameter."""
    T = draws.pooled("T")
    T_prime = draws.pooled("T_prime")
    T_hat, T_prime_hat = float(T.mean()), float(T_prime.mean())
    mu_names = [n for n in draws.names if n.startswith("mu[")]
    mu_bar = float(np.mean([draws.pooled(n).mean() for n in mu_names])) if mu_names else math.nan

    max_r_hat, min_ess, converged = convergence(draws, threshold=threshold)
    if not converged:
        logger.warning(f"{league_id} {outcome}: max r_hat {max_r_hat:.4f} above {threshold}")
    return LeagueFitReport(
        league_id=league_id,
        outcome=str(Outcome(outcome)),
        T_hat=T_hat,
        T_prime_hat=T_prime_hat,
        delta=T_prime_hat - T_hat,
        pct_change=pct_change(T_hat, T_prime_hat),
        p_decline=prob_ha_decline(T, T_prime, outcome),
        max_r_hat=max_r_hat,
        min_ess=min_ess,
        converged=converged,
        mu_bar=mu_bar,
    )


def league_table(fits, outcome, leagues=None, threshold=RHAT_THRESHOLD):
    """
    One report per league, sorted by p_decline descending then league id.

    Parameters:
        fits: mapping league_id -> PosteriorDraws, or None for a league whose fit is missing
        outcome: goals or yellows
        leagues: optional full league list; leagues absent from ``fits`` are reported
            with ``missing=True`` after the fitted ones
    """
    league_ids = sorted(set(fits) | set(leagues or ()))
    reports, missing = [], []
    for league_id in league_ids:
        draws = fits.get(league_id)
        if draws is None:
            logger.warning(f"no {outcome} fit for {league_id}")
            missing.append(LeagueFitReport(league_id, str(Outcome(outcome)), missing=True))
            continue
        reports.append(league_report(league_id, draws, outcome, threshold))
    return sort_reports(reports + missing)


def reports_frame(reports):
    return pd.DataFrame([asdict(r) for r in reports])


def joint_quadrants(goals_reports, yellows_reports):
    """
    Per-league arrows from pre to post posterior means, yellow cards on x and goals on y,
    and the number of leagues in each direction quadrant.

    A league counts as declining in goals when T_prime_hat < T_hat and in yellow cards
    when T_prime_hat > T_hat; equal means count as a rise.

    Raises:
        DataError: the two report sets cover different leagues
    """
    goals = {r.league_id: r for r in goals_reports if not r.missing}
    yellows = {r.league_id: r for r in yellows_reports if not r.missing}
    if set(goals) != set(yellows):
        raise DataError(
            f"goals and yellows reports cover different leagues: "
            f"{sorted(set(goals) ^ set(yellows))}"
        )

    rows = []
    counts = dict.fromkeys(QUADRANTS, 0)
    for league_id in sorted(goals):
        g, y = goals[league_id], yellows[league_id]
        goals_decline = g.T_prime_hat < g.T_hat
        yellows_decline = y.T_prime_hat > y.T_hat
        if goals_decline and yellows_decline:
            quadrant = "both_decline"
        elif yellows_decline:
            quadrant = "goals_rise_yellows_decline"
        elif goals_decline:
            quadrant = "goals_decline_yellows_rise"
        else:
            quadrant = "both_rise"
        counts[quadrant] += 1
        rows.append(
            {
                "league_id": league_id,
                "yellows_pre": y.T_hat,
                "goals_pre": g.T_hat,
                "yellows_post": y.T_prime_hat,
                "goals_post": g.T_prime_hat,
                "quadrant": quadrant,
            }
        )
    columns = ["league_id", "yellows_pre", "goals_pre", "yellows_post", "goals_post", "quadrant"]
    return pd.DataFrame(rows, columns=columns), counts


def team_strengths(draws):
    """Posterior means of the team-season effects, one row per (season, team)."""
    rows = {}
    for name in draws.names:
        match = _EFFECT_NAME.match(name)
        if match is None:
            continue
        family, season, team = match.groups()
        rows.setdefault((season, team), {"season": season, "team": team})[family] = float(
            draws.pooled(name).mean()
        )
    if not rows:
        return pd.DataFrame(columns=["season", "team"])
    return pd.DataFrame(list(rows.values())).sort_values(["season", "team"], ignore_index=True)


def parameter_family(name):
    return name.split("[", 1)[0]


def ess_table(draws):
    """Mean and minimum ESS per parameter family (mu, attack, ..., T, T_prime, sigma_*)."""
    values = ess_by_parameter(draws)
    families = values.index.map(parameter_family)
    table = values.groupby(families, sort=False).agg(["count", "mean", "min"])
    table.index.name = "family"
    return table.rename(columns={"count": "n_parameters", "mean": "mean_ess", "min": "min_ess"}).reset_index()


def average_goal_scale_ha(reports):
    """
    Goals per game home advantage of an average league, before and after the restart.

    Averages mu_bar, T_hat and T_prime_hat over the fitted leagues and applies
    goal_scale_ha to each period.
    """
    fitted = [r for r in reports if not r.missing]
    if not fitted:
        raise ValueError("no fitted leagues")
    mu = float(np.mean([r.mu_bar for r in fitted]))
    T = float(np.mean([r.T_hat for r in fitted]))
    T_prime = float(np.mean([r.T_prime_hat for r in fitted]))
    pre, post = goal_scale_ha(mu, T), goal_scale_ha(mu, T_prime)
    return {
        "n_leagues": len(fitted),
        "mu_bar": mu,
        "T_bar": T,
        "T_prime_bar": T_prime,
        "ha_pre": pre,
        "ha_post": post,
        "relative_decline": (pre - post) / pre if pre != 0 else math.nan,
    }


def decline_counts(reports, thresholds=DECLINE_THRESHOLDS):
    """Number of fitted leagues with p_decline above each threshold."""
    fitted = [r for r in reports if not r.missing]
    return {f"p_decline>{t:g}": sum(r.p_decline > t for r in fitted) for t in thresholds}


def sort_reports(reports):
    """Fitted leagues by p_decline descending then league id, missing leagues last."""
    fitted = sorted((r for r in reports if not r.missing), key=lambda r: (-r.p_decline, r.league_id))
    missing = sorted((r for r in reports if r.missing), key=lambda r: r.league_id)
    return fitted + missing
