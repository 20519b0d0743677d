import math

import numpy as np
import pandas as pd
import pytest

from bphaven.errors import ConfigurationError, EstimationError
from bphaven.simgrid import (
    SimCell,
    SimSeason,
    TeamStrengths,
    bias_frame,
    bias_from_estimates,
    bias_grid,
    default_estimators,
    fit_bvp_model,
    fit_ols_fixed_effects,
    fit_paired_comparison,
    fixed_effects_design,
    full_grid,
    gen_team_strengths,
    schedule_double_round_robin,
    season_estimates,
    season_seeds,
    simulate_bvn,
    simulate_bvp,
    simulate_cell_season,
)
from bphaven.simgrid.grid import _linear_regression

QUICK_CHAINS = {"iterations": 3000, "burn_in": 1000}


def season_from_differences(n_teams, differences):
    """Season whose goal differences are differences(h, a), shifted to non-negative goals."""
    games = np.array(schedule_double_round_robin(n_teams))
    home, away = games[:, 0], games[:, 1]
    diff = np.array([differences(h, a) for h, a in games], dtype=np.int64)
    base = 10
    return SimSeason(home, away, base + diff, np.full(len(diff), base), n_teams)


def test_schedule_combinatorics():
    assert schedule_double_round_robin(2) == [(0, 1), (1, 0)]
    games = schedule_double_round_robin(20)
    assert len(games) == 380
    assert len(set(games)) == 380
    home_counts = np.bincount([h for h, _ in games])
    assert np.all(home_counts == 19)
    unordered = pd.Series([frozenset(g) for g in games]).value_counts()
    assert (unordered == 2).all()
    with pytest.raises(ConfigurationError):
        schedule_double_round_robin(1)


def test_team_strength_correlation():
    strengths = gen_team_strengths(-0.8, 100_000, np.random.default_rng(0))
    assert np.corrcoef(strengths.attack, strengths.defend)[0, 1] == pytest.approx(-0.8, abs=0.01)
    assert strengths.attack.std() == pytest.approx(0.35, abs=0.005)
    with pytest.raises(ConfigurationError):
        gen_team_strengths(1.0, 10, np.random.default_rng(0))


def test_bvp_home_mean():
    rng = np.random.default_rng(1)
    strengths = TeamStrengths.zeros(20)
    seasons = [simulate_bvp(strengths, 0.5, rng) for _ in range(100)]
    home = np.concatenate([s.home_goals for s in seasons])
    away = np.concatenate([s.away_goals for s in seasons])
    assert home.mean() == pytest.approx(math.exp(0.5), abs=0.03)
    assert away.mean() == pytest.approx(1.0, abs=0.03)


@pytest.mark.parametrize("T_star", [0.0, 0.25, 0.5])
def test_bvn_goal_difference_mean(T_star):
    rng = np.random.default_rng(2)
    strengths = TeamStrengths.zeros(20)
    seasons = [simulate_bvn(strengths, T_star, rng) for _ in range(270)]
    goals = np.concatenate([np.r_[s.home_goals, s.away_goals] for s in seasons])
    diff = np.concatenate([s.goal_difference for s in seasons])
    assert goals.min() >= 0
    assert diff.mean() == pytest.approx(T_star, abs=0.03)


def test_bvn_rejects_other_home_advantages():
    with pytest.raises(ConfigurationError):
        simulate_bvn(TeamStrengths.zeros(4), 0.3, np.random.default_rng(0))


def test_ols_on_goalless_season():
    season = season_from_differences(6, lambda h, a: 0)
    assert fit_ols_fixed_effects(season) == pytest.approx(0.0, abs=1e-12)


def test_ols_recovers_noiseless_home_advantage():
    theta = [0, 1, 2, 3, -1, 2]
    season = season_from_differences(6, lambda h, a: 1 + theta[h] - theta[a])
    assert fixed_effects_design(season).shape == (30, 11)
    assert fit_ols_fixed_effects(season) == pytest.approx(1.0, abs=1e-10)


def test_ols_with_two_teams_is_rank_deficient():
    season = season_from_differences(2, lambda h, a: 1)
    with pytest.raises(EstimationError):
        fit_ols_fixed_effects(season)


def test_season_to_matches():
    season = season_from_differences(12, lambda h, a: 0)
    matches = season.to_matches()
    assert len(matches) == 132
    assert matches[0].home_team == "t00" and matches[0].away_team == "t01"
    assert len({m.date for m in matches}) == 132


def test_sim_cell_validation_and_truth():
    assert SimCell("bvp", 0.0, 0.5).truth == pytest.approx(math.exp(0.5) - 1.0)
    assert SimCell("bvn", -0.4, 0.25).truth == 0.25
    for bad in (
        dict(dgp="bvx", rho_star=0.0, T_star=0.0),
        dict(dgp="bvp", rho_star=0.4, T_star=0.0),
        dict(dgp="bvp", rho_star=-1.0, T_star=0.0),
        dict(dgp="bvp", rho_star=0.0, T_star=-0.1),
        dict(dgp="bvp", rho_star=0.0, T_star=0.0, n_teams=5),
        dict(dgp="bvp", rho_star=0.0, T_star=0.0, n_seasons=0),
    ):
        with pytest.raises(ConfigurationError):
            SimCell(**bad)


def test_full_grid_order():
    cells = full_grid(n_seasons=25)
    assert len(cells) == 18
    assert (cells[0].dgp, cells[0].rho_star, cells[0].T_star) == ("bvp", -0.8, 0.0)
    assert (cells[-1].dgp, cells[-1].rho_star, cells[-1].T_star) == ("bvn", 0.0, 0.5)
    assert all(c.n_seasons == 25 for c in cells)


def test_season_seeds_are_reproducible_and_distinct():
    cell = SimCell("bvp", 0.0, 0.25)
    first = [s.generate_state(2).tolist() for s in season_seeds(cell, 0, 42)]
    again = [s.generate_state(2).tolist() for s in season_seeds(cell, 0, 42)]
    other_season = [s.generate_state(2).tolist() for s in season_seeds(cell, 1, 42)]
    other_cell = [s.generate_state(2).tolist() for s in season_seeds(SimCell("bvp", 0.0, 0.5), 0, 42)]
    assert first == again
    assert len({tuple(s) for s in first}) == 3
    assert first != other_season and first != other_cell

    a = simulate_cell_season(cell, 3, 42)
    b = simulate_cell_season(cell, 3, 42)
    np.testing.assert_array_equal(a.home_goals, b.home_goals)


def exact_quarter(season, seed):
    return 0.25


def always_fails(season, seed):
    raise RuntimeError("no estimate")


def test_exact_estimator_has_no_bias():
    cell = SimCell("bvn", 0.0, 0.25, n_seasons=3, n_teams=4)
    rows = bias_grid([cell], master_seed=1, estimators={"exact": exact_quarter})
    assert len(rows) == 1
    row = rows[0]
    assert (row.MAB, row.MB, row.n_seasons, row.partial) == (0.0, 0.0, 3, False)


def test_mean_absolute_bias_bounds_mean_bias():
    cells = [SimCell("bvp", rho, T, n_seasons=6, n_teams=6) for rho in (-0.8, 0.0) for T in (0.0, 0.5)]
    rows = bias_grid(cells, master_seed=2, estimators={"linear_regression": _linear_regression})
    assert len(rows) == 4
    for row in rows:
        assert row.MAB >= abs(row.MB)
        assert row.MAB > 0


def test_failed_seasons_are_reported():
    cell = SimCell("bvp", 0.0, 0.0, n_seasons=2, n_teams=4)
    estimates = season_estimates(
        [cell], 0, estimators={"broken": always_fails, "linear_regression": _linear_regression}
    )
    broken = estimates[estimates["estimator"] == "broken"]
    assert broken["estimate"].isna().all()
    assert broken["error"].str.startswith("RuntimeError").all()
    rows = {r.estimator: r for r in bias_from_estimates(estimates)}
    assert rows["broken"].partial and rows["broken"].n_failed == 2
    assert math.isnan(rows["broken"].MAB)
    assert not rows["linear_regression"].partial
    frame = bias_frame(list(rows.values()))
    assert list(frame["partial"]) == [True, False]


def test_estimates_do_not_depend_on_worker_count():
    cells = [SimCell("bvn", -0.4, 0.5, n_seasons=4, n_teams=6), SimCell("bvp", 0.0, 0.25, n_seasons=4, n_teams=6)]
    estimators = {"linear_regression": _linear_regression}
    serial = season_estimates(cells, 5, estimators=estimators, n_jobs=1)
    parallel = season_estimates(cells, 5, estimators=estimators, n_jobs=2)
    pd.testing.assert_frame_equal(serial, parallel)


def test_default_estimators():
    assert sorted(default_estimators()) == ["bivariate_poisson", "linear_regression", "paired_comparison"]


@pytest.mark.slow
def test_paired_comparison_on_symmetric_season():
    margins = np.random.default_rng(3).integers(0, 4, size=(8, 8))
    season = season_from_differences(8, lambda h, a: margins[min(h, a), max(h, a)] * (1 if h < a else -1))
    estimate = fit_paired_comparison(season, seed=1, chains=QUICK_CHAINS)
    assert abs(estimate) < 0.08


@pytest.mark.slow
def test_paired_comparison_tracks_mean_goal_difference():
    season = simulate_bvp(gen_team_strengths(0.0, 20, np.random.default_rng(4)), 0.5, np.random.default_rng(5))
    estimate = fit_paired_comparison(season, seed=2, chains=QUICK_CHAINS)
    assert estimate == pytest.approx(season.goal_difference.mean(), abs=0.05)


@pytest.mark.slow
def test_bivariate_poisson_estimator_near_truth():
    season = simulate_bvp(TeamStrengths.zeros(20), 0.5, np.random.default_rng(6))
    estimate = fit_bvp_model(season, seed=3, chains=QUICK_CHAINS)
    assert estimate == pytest.approx(math.expm1(0.5), abs=0.35)


@pytest.mark.slow
@pytest.mark.parametrize(
    "dgp, rho_star, T_star", [("bvp", -0.8, 0.0), ("bvp", -0.4, 0.5), ("bvn", 0.0, 0.5), ("bvn", -0.8, 0.25)]
)
def test_desk_scale_bias_bands(dgp, rho_star, T_star):
    cell = SimCell(dgp, rho_star, T_star, n_seasons=25)
    rows = {r.estimator: r for r in bias_grid([cell], master_seed=7, n_jobs=2)}
    bvp = rows["bivariate_poisson"].MAB
    linear = rows["linear_regression"].MAB
    paired = rows["paired_comparison"].MAB
    assert not any(r.partial for r in rows.values())
    assert 0.03 <= bvp <= 0.12
    assert 0.30 <= linear <= 0.65
    assert linear > 4 * bvp
    assert paired <= 1.6 * bvp
