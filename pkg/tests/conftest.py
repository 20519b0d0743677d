import json
from datetime import date, timedelta

import numpy as np
import pandas as pd
import pytest

from bphaven.data import Match
from bphaven.model import CovarianceMode, ModelSpec, Outcome, build_design

TEAMS = ["Aston", "Burnley", "Crewe", "Derby"]
SEASON_STARTS = {"2018-19": date(2018, 8, 4), "2019-20": date(2019, 8, 3)}
RESTART = date(2019, 10, 12)


def round_robin_matches(league_id, rng, seasons=("2018-19", "2019-20"), teams=TEAMS):
    """Weekly double round robins with Poisson goals and yellow cards."""
    matches = []
    for season in seasons:
        day = SEASON_STARTS[season]
        for h in teams:
            for a in teams:
                if h == a:
                    continue
                matches.append(
                    Match(
                        league_id=league_id,
                        season_id=season,
                        date=day,
                        home_team=h,
                        away_team=a,
                        home_goals=int(rng.poisson(1.5)),
                        away_goals=int(rng.poisson(1.1)),
                        home_yellows=int(rng.poisson(1.6)),
                        away_yellows=int(rng.poisson(2.0)),
                    )
                )
                day += timedelta(days=7)
    return matches


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy_matches():
    return round_robin_matches("toy", np.random.default_rng(7))


@pytest.fixture
def goals_design(toy_matches):
    spec = ModelSpec(Outcome.GOALS, CovarianceMode.ZERO, "toy", ("2018-19", "2019-20"), RESTART)
    return build_design(toy_matches, spec)


def write_dataset(root, league_ids=("alpha-league", "beta-league"), seed=3):
    """CSV files plus a league config whose expected counts match them exactly."""
    data_dir = root / "raw"
    data_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    entries = []
    for league_id in league_ids:
        matches = round_robin_matches(league_id, rng)
        pd.DataFrame(
            [
                {
                    "league": m.league_id,
                    "season": m.season_id,
                    "date": m.date.isoformat(),
                    "home": m.home_team,
                    "away": m.away_team,
                    "hg": m.home_goals,
                    "ag": m.away_goals,
                    "hy": m.home_yellows,
                    "ay": m.away_yellows,
                }
                for m in matches
            ]
        ).to_csv(data_dir / f"{league_id}.csv", index=False)
        n_post = sum(m.date >= RESTART for m in matches)
        n_pre = len(matches) - n_post
        entries.append(
            {
                "league_id": league_id,
                "display_name": league_id.title(),
                "country": "Testland",
                "tier": 1,
                "restart_date": RESTART.isoformat(),
                "season_windows": {
                    "2018-19": ["2018-07-01", "2019-06-30"],
                    "2019-20": ["2019-07-01", "2020-08-31"],
                },
                "expected": {
                    "pre_goals": n_pre,
                    "post_goals": n_post,
                    "pre_yellows": n_pre,
                    "post_yellows": n_post,
                    "team_seasons": 2 * len(TEAMS),
                },
            }
        )
    league_file = root / "leagues.json"
    league_file.write_text(json.dumps({"leagues": entries}), encoding="utf-8")
    return data_dir, league_file
