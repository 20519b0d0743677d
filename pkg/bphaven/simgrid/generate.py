"""
generate.py

Synthetic seasons for the estimator-bias study.

A season is a double round robin between teams whose attack and defence strengths are
drawn from a bivariate normal. Goals come from one of two processes: independent
Poisson rates with a multiplicative home advantage (bvp), or rounded truncated normals
with a home goal added at random (bvn).
"""

from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from ..data.match import Match
from ..distributions import bp_sample_many, sample_truncated_normal
from ..errors import ConfigurationError
from .config import BVN_LOWER, BVN_MEAN, BVN_SD, BVN_T_STARS, SIM_LEAGUE_ID, SIM_SEASON_ID, STRENGTH_SD

_SEASON_START = date(2000, 8, 1)


@dataclass(frozen=True)
class TeamStrengths:
    attack: np.ndarray
    defend: np.ndarray

    @property
    def n_teams(self):
        return len(self.attack)

    @classmethod
    def zeros(cls, n_teams):
        return cls(np.zeros(n_teams), np.zeros(n_teams))


@dataclass(frozen=True)
class SimSeason:
    home: np.ndarray
    away: np.ndarray
    home_goals: np.ndarray
    away_goals: np.ndarray
    n_teams: int

    @property
    def n_games(self):
        return len(self.home)

    @property
    def goal_difference(self):
        return self.home_goals - self.away_goals

    def to_matches(self, league_id=SIM_LEAGUE_ID, season_id=SIM_SEASON_ID):
        """Matches with teams named t00, t01, ... and one game per day."""
        width = len(str(self.n_teams - 1))
        return [
            Match(
                league_id=league_id,
                season_id=season_id,
                date=_SEASON_START + timedelta(days=i),
                home_team=f"t{h:0{width}d}",
                away_team=f"t{a:0{width}d}",
                home_goals=int(hg),
                away_goals=int(ag),
            )
            for i, (h, a, hg, ag) in enumerate(zip(self.home, self.away, self.home_goals, self.away_goals))
        ]


def gen_team_strengths(rho_star, n_teams, rng, sd=STRENGTH_SD):
    """(attack, defend) pairs from N(0, [[sd^2, rho sd^2], [rho sd^2, sd^2]])."""
    if not -1.0 < rho_star < 1.0:
        raise ConfigurationError(f"rho_star must lie in (-1, 1), got {rho_star}")
    cov = sd**2 * np.array([[1.0, rho_star], [rho_star, 1.0]])
    pairs = rng.multivariate_normal(np.zeros(2), cov, size=n_teams)
    return TeamStrengths(attack=pairs[:, 0], defend=pairs[:, 1])


def schedule_double_round_robin(n_teams):
    """Every ordered pair (home, away) of distinct teams, once."""
    if n_teams < 2:
        raise ConfigurationError(f"a round robin needs at least 2 teams, got {n_teams}")
    return [(h, a) for h in range(n_teams) for a in range(n_teams) if h != a]


def _fixtures(strengths):
    games = np.array(schedule_double_round_robin(strengths.n_teams))
    return games[:, 0], games[:, 1]


def simulate_bvp(strengths, T_star, rng):
    """Independent Poisson goals with log rates T* + a_H + d_A (home) and a_A + d_H (away)."""
    home, away = _fixtures(strengths)
    a, d = strengths.attack, strengths.defend
    lambda1 = np.exp(T_star + a[home] + d[away])
    lambda2 = np.exp(a[away] + d[home])
    home_goals, away_goals = bp_sample_many(lambda1, lambda2, rng)
    return SimSeason(home, away, home_goals, away_goals, strengths.n_teams)


def simulate_bvn(strengths, T_star, rng):
    """
    Rounded truncated-normal goals, then one extra home goal with probability T*.

    Raises:
        ConfigurationError: T_star outside 0, 0.25 and 0.5
    """
    if T_star not in BVN_T_STARS:
        raise ConfigurationError(f"the bvn process supports T* in {BVN_T_STARS}, got {T_star}")
    home, away = _fixtures(strengths)
    a, d = strengths.attack, strengths.defend
    raw_home = sample_truncated_normal(BVN_MEAN + a[home] + d[away], BVN_SD, BVN_LOWER, rng)
    raw_away = sample_truncated_normal(BVN_MEAN + a[away] + d[home], BVN_SD, BVN_LOWER, rng)
    # the lower bound rounds to 0, so rounded goals are never negative
    home_goals = np.rint(raw_home).astype(np.int64)
    away_goals = np.rint(raw_away).astype(np.int64)
    home_goals += rng.random(len(home)) < T_star
    return SimSeason(home, away, home_goals, away_goals, strengths.n_teams)
