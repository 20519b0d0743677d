"""
validation.py

Checks a loaded dataset against the expected per-league sample sizes and reports
observed home/away correlations.
"""

from dataclasses import dataclass, field

from loguru import logger
import numpy as np
import pandas as pd

COUNT_FIELDS = ["pre_goals", "post_goals", "pre_yellows", "post_yellows", "team_seasons"]


@dataclass
class ValidationReport:
    table: pd.DataFrame
    mismatches: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.mismatches

    def to_dict(self):
        return {
            "passed": self.passed,
            "mismatches": self.mismatches,
            "leagues": self.table.astype(object).where(self.table.notna(), None).to_dict(orient="records"),
        }


def league_counts(matches, restart_date):
    """Computed sample sizes of one league's matches."""
    goals = [m for m in matches if m.has_goals]
    yellows = [m for m in matches if m.has_yellows]
    return {
        "pre_goals": sum(1 for m in goals if not m.is_post(restart_date)),
        "post_goals": sum(1 for m in goals if m.is_post(restart_date)),
        "pre_yellows": sum(1 for m in yellows if not m.is_post(restart_date)),
        "post_yellows": sum(1 for m in yellows if m.is_post(restart_date)),
        "team_seasons": len(
            {(m.season_id, t) for m in goals for t in (m.home_team, m.away_team)}
        ),
    }


def validate_counts(matches, expected):
    """
    Compare computed pre/post goal and yellow-card sample sizes with expectations.

    Parameters:
        matches: list of Match (any number of leagues)
        expected: mapping league_id -> LeagueConfig carrying restart dates and ExpectedCounts

    Returns:
        ValidationReport with one row per configured league and a list of mismatches
    """
    by_league = {}
    for match in matches:
        by_league.setdefault(match.league_id, []).append(match)

    rows, mismatches = [], []
    for league_id, config in expected.items():
        computed = league_counts(by_league.get(league_id, []), config.restart_date)
        row = {"league_id": league_id}
        for name in COUNT_FIELDS:
            want = getattr(config.expected, name) if config.expected else None
            got = computed[name]
            row[name] = got
            row[f"expected_{name}"] = want
            if want is not None and want != got:
                mismatches.append(
                    {"league_id": league_id, "field": name, "expected": want, "computed": got}
                )
        rows.append(row)

    unexpected = sorted(set(by_league) - set(expected))
    for league_id in unexpected:
        mismatches.append({"league_id": league_id, "field": "league", "expected": None,
                           "computed": len(by_league[league_id])})

    report = ValidationReport(table=pd.DataFrame(rows), mismatches=mismatches)
    if report.passed:
        logger.info(f"Validation passed for {len(rows)} leagues")
    else:
        logger.warning(f"Validation found {len(mismatches)} mismatches")
    return report


def _pair_correlation(pairs):
    if len(pairs) < 2:
        return np.nan
    arr = np.asarray(pairs, dtype=float)
    if arr[:, 0].std() == 0 or arr[:, 1].std() == 0:
        return np.nan
    return float(pd.Series(arr[:, 0]).corr(pd.Series(arr[:, 1])))


def observed_correlations(matches):
    """
    Per-league sample correlation between home and away counts.

    Returns:
        DataFrame with league_id, goals_corr, yellows_corr, n_goals, n_yellows and a
        ``degenerate`` flag when a correlation is undefined (fewer than 2 matches or zero
        variance on one side)
    """
    by_league = {}
    for match in matches:
        by_league.setdefault(match.league_id, []).append(match)

    rows = []
    for league_id in sorted(by_league):
        league = by_league[league_id]
        goals = [m.counts("goals") for m in league if m.has_goals]
        yellows = [m.counts("yellows") for m in league if m.has_yellows]
        row = {
            "league_id": league_id,
            "goals_corr": _pair_correlation(goals),
            "yellows_corr": _pair_correlation(yellows),
            "n_goals": len(goals),
            "n_yellows": len(yellows),
        }
        row["degenerate"] = bool(np.isnan(row["goals_corr"]) or np.isnan(row["yellows_corr"]))
        if row["degenerate"]:
            logger.warning(f"{league_id}: correlation undefined (degenerate variance)")
        rows.append(row)
    return pd.DataFrame(
        rows, columns=["league_id", "goals_corr", "yellows_corr", "n_goals", "n_yellows", "degenerate"]
    )
