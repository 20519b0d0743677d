from datetime import date
import math

import numpy as np
import pytest
from scipy import stats

from bphaven.distributions import BPParams, bp_log_pmf
from bphaven.errors import ConfigurationError, DesignError, EvaluationError
from bphaven.data import Match
from bphaven.model import (
    BPPosterior,
    CovarianceMode,
    ModelSpec,
    Outcome,
    ParamLayout,
    ParamVector,
    PriorSpec,
    build_design,
    default_priors,
    empirical_bayes_priors,
    log_likelihood,
    log_posterior,
    log_prior,
)
from bphaven.model.posterior import _log_rates

from conftest import RESTART, TEAMS

SEASONS = ("2018-19", "2019-20")


def make_design(matches, outcome="goals", mode="zero", restart=RESTART):
    spec = ModelSpec(Outcome(outcome), CovarianceMode(mode), "toy", SEASONS, restart)
    return build_design(matches, spec)


def random_params(design, rng, scale=0.3):
    layout = ParamLayout(design)
    return layout.unpack(scale * rng.normal(size=layout.size))


def direct_log_likelihood(matches, params, design):
    """Match-by-match sum with explicit rates."""
    spec = design.spec
    slot = {label: i for i, label in enumerate(design.slot_labels)}
    season = {s: i for i, s in enumerate(spec.seasons)}
    lambda3 = math.exp(params.gamma) if spec.has_gamma else 0.0
    total = 0.0
    for m in matches:
        h, a = slot[(m.season_id, m.home_team)], slot[(m.season_id, m.away_team)]
        mu = params.mu[season[m.season_id]]
        ha = params.T_prime if spec.has_post and m.date >= spec.restart_date else params.T
        if spec.outcome is Outcome.GOALS:
            eta1 = mu + ha + params.attack[h] + params.defend[a]
            eta2 = mu + params.attack[a] + params.defend[h]
        else:
            eta1 = mu + ha + params.team_card[h]
            eta2 = mu + params.team_card[a]
        y1, y2 = m.counts(spec.outcome)
        total += bp_log_pmf(y1, y2, BPParams(math.exp(eta1), math.exp(eta2), lambda3))
    return total


def test_design_slots(goals_design):
    design = goals_design
    assert design.n_matches == 24
    assert design.n_seasons == 2
    assert design.n_slots == 2 * len(TEAMS)
    assert design.slot_labels[0] == ("2018-19", "Aston")
    assert int(design.post.sum()) == 2
    assert list(design.slot_season) == [0] * 4 + [1] * 4


def test_design_is_read_only(goals_design):
    with pytest.raises(ValueError):
        goals_design.y_home[0] = 99


def test_design_rejects_foreign_matches(toy_matches):
    stray = Match("other", "2019-20", date(2019, 9, 1), "Aston", "Burnley", 1, 0)
    with pytest.raises(DesignError):
        make_design(toy_matches + [stray])
    unknown = Match("toy", "2017-18", date(2017, 9, 1), "Aston", "Burnley", 1, 0)
    with pytest.raises(DesignError):
        make_design(toy_matches + [unknown])


def test_design_rejects_idle_team(toy_matches):
    spec = ModelSpec(Outcome.GOALS, CovarianceMode.ZERO, "toy", SEASONS, RESTART)
    with pytest.raises(DesignError):
        build_design(toy_matches, spec, teams={"2019-20": TEAMS + ["Everton"]})


def test_design_rejects_empty_season(toy_matches):
    only_first = [m for m in toy_matches if m.season_id == "2018-19"]
    with pytest.raises(DesignError):
        make_design(only_first, restart=None)


def test_restart_date_must_fall_in_last_season(toy_matches):
    with pytest.raises(DesignError):
        make_design(toy_matches, restart=date(2019, 1, 1))
    with pytest.raises(DesignError):
        make_design(toy_matches, restart=date(2020, 6, 1))


def test_matches_without_yellows_are_left_out(toy_matches):
    first = toy_matches[0]
    stripped = Match(first.league_id, first.season_id, first.date, first.home_team, first.away_team,
                     first.home_goals, first.away_goals)
    matches = [stripped] + toy_matches[1:]
    assert make_design(matches, outcome="yellows").n_matches == 23
    assert make_design(matches, outcome="goals").n_matches == 24


def test_single_match_log_likelihood():
    match = Match("toy", "2018-19", date(2018, 9, 1), "Aston", "Burnley", 1, 1)
    spec = ModelSpec(Outcome.GOALS, CovarianceMode.ZERO, "toy", ("2018-19",))
    design = build_design([match], spec)
    params = ParamVector.zeros(design)
    assert log_likelihood(params, design) == pytest.approx(-2.0, abs=1e-12)

    params.T = 0.5
    want = stats.poisson.logpmf(1, math.exp(0.5)) + stats.poisson.logpmf(1, 1.0)
    assert log_likelihood(params, design) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("outcome", ["goals", "yellows"])
@pytest.mark.parametrize("mode", ["zero", "free"])
@pytest.mark.parametrize("restart", [RESTART, None])
def test_log_likelihood_matches_direct_sum(toy_matches, outcome, mode, restart):
    design = make_design(toy_matches, outcome, mode, restart)
    params = random_params(design, np.random.default_rng(11))
    want = direct_log_likelihood(toy_matches, params, design)
    assert abs(log_likelihood(params, design) - want) < 1e-9


def test_log_likelihood_ignores_match_order(toy_matches):
    params = random_params(make_design(toy_matches), np.random.default_rng(3))
    shuffled = list(np.random.default_rng(4).permutation(toy_matches))
    a = log_likelihood(params, make_design(toy_matches))
    b = log_likelihood(params, make_design(shuffled))
    assert a == pytest.approx(b, abs=1e-9)


def test_home_advantage_moves_only_home_rates(toy_matches):
    design = make_design(toy_matches, mode="zero", restart=None)
    params = random_params(design, np.random.default_rng(5))
    base = log_likelihood(params, design)
    params.T += 0.2
    shifted = log_likelihood(params, design)

    params.T -= 0.2
    # with lambda3 = 0 the change is 0.2 * sum(y1) - sum(l1) * (e^0.2 - 1)
    log_l1, _, _ = _log_rates(params, design)
    want = 0.2 * design.y_home.sum() - np.exp(log_l1).sum() * (math.exp(0.2) - 1.0)
    assert shifted - base == pytest.approx(want, abs=1e-9)


def test_log_likelihood_input_errors(goals_design):
    params = ParamVector.zeros(goals_design)
    params.T = float("nan")
    with pytest.raises(EvaluationError):
        log_likelihood(params, goals_design)

    params = ParamVector.zeros(goals_design)
    params.gamma = 0.0
    with pytest.raises(DesignError):
        log_likelihood(params, goals_design)

    other = ModelSpec(Outcome.YELLOWS, CovarianceMode.ZERO, "toy", SEASONS, RESTART)
    with pytest.raises(ConfigurationError):
        log_likelihood(ParamVector.zeros(goals_design), goals_design, other)


def test_log_prior_closed_form(goals_design):
    spec = goals_design.spec
    params = ParamVector.zeros(goals_design)
    n_slots = goals_design.n_slots
    want = (
        4 * stats.norm.logpdf(0.0, 0.0, 5.0)
        + 2 * n_slots * stats.norm.logpdf(0.0)
        + 2 * stats.invgamma.logpdf(1.0, a=1.0, scale=1.0)
    )
    assert log_prior(params, default_priors(spec), spec) == pytest.approx(want, abs=1e-10)


def test_log_prior_rejects_nonpositive_scale(goals_design):
    spec = goals_design.spec
    params = ParamVector.zeros(goals_design)
    params.sigma_att = -0.1
    assert log_prior(params, default_priors(spec), spec) == -np.inf
    assert log_posterior(params, goals_design, spec, default_priors(spec)) == -np.inf


def test_gamma_prior_by_outcome(toy_matches):
    goals = make_design(toy_matches, "goals", "free")
    yellows = make_design(toy_matches, "yellows", "free")
    assert default_priors(goals.spec).gamma_prior.variance == 0.5
    assert default_priors(yellows.spec).gamma_prior.variance == 2.0
    with pytest.raises(ConfigurationError):
        log_prior(ParamVector.zeros(goals), PriorSpec(), goals.spec)


def test_log_posterior_is_sum(goals_design):
    spec = goals_design.spec
    priors = default_priors(spec)
    params = random_params(goals_design, np.random.default_rng(8))
    want = log_likelihood(params, goals_design) + log_prior(params, priors, spec)
    assert log_posterior(params, goals_design, spec, priors) == pytest.approx(want)


def test_layout_round_trip(goals_design):
    layout = ParamLayout(goals_design)
    assert layout.size == 2 + 2 + 2 * 8 + 2
    assert layout.names[:2] == ("mu[2018-19]", "mu[2019-20]")
    assert "attack[2019-20|Derby]" in layout.names
    assert layout.unconstrained_names[-1] == "log_sigma_def"
    theta = np.random.default_rng(1).normal(size=layout.size)
    np.testing.assert_allclose(layout.pack(layout.unpack(theta)), theta)
    constrained = layout.constrain(theta)
    assert constrained[-1] == pytest.approx(math.exp(theta[-1]))


def test_posterior_density_adds_jacobian(goals_design):
    posterior = BPPosterior(goals_design)
    theta = np.random.default_rng(2).normal(scale=0.3, size=posterior.layout.size)
    params = posterior.layout.unpack(theta)
    want = log_posterior(params, goals_design, goals_design.spec, posterior.priors)
    want += math.log(params.sigma_att) + math.log(params.sigma_def)
    assert posterior.log_density(theta) == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("outcome", ["goals", "yellows"])
def test_component_terms_track_single_coordinate_moves(toy_matches, outcome):
    posterior = BPPosterior(make_design(toy_matches, outcome, "zero"))
    rng = np.random.default_rng(6)
    theta = rng.normal(scale=0.3, size=posterior.layout.size)
    for block in posterior.blocks():
        if not block.separable:
            continue
        before = posterior.component_terms(theta, block)
        j = block.index[1]
        moved = theta.copy()
        moved[j] += 0.25
        after = posterior.component_terms(moved, block)
        change = posterior.log_density(moved) - posterior.log_density(theta)
        assert change == pytest.approx(after[1] - before[1], abs=1e-9)
        np.testing.assert_allclose(np.delete(after, 1), np.delete(before, 1), atol=1e-9)


def test_blocks_cover_every_coordinate(toy_matches):
    for mode in ("zero", "free"):
        posterior = BPPosterior(make_design(toy_matches, "goals", mode))
        covered = np.sort(np.concatenate([b.index for b in posterior.blocks()]))
        np.testing.assert_array_equal(covered, np.arange(posterior.layout.size))
    free_blocks = [b.name for b in BPPosterior(make_design(toy_matches, "goals", "free")).blocks()]
    assert "attack[2019-20]" in free_blocks


def test_empirical_bayes_example():
    priors = empirical_bayes_priors({"a": (0.1, 0.0), "b": (0.3, -0.2)})
    prior = priors["a"]
    assert prior is priors["b"]
    assert prior.T_prior.mean == pytest.approx(0.2)
    assert prior.T_prior.variance == pytest.approx(0.18)
    assert prior.T_prime_prior.mean == pytest.approx(-0.1)
    assert prior.gamma_prior.variance == 0.5


def test_empirical_bayes_variance_is_nine_sample_variances():
    values = np.random.default_rng(0).normal(0.3, 0.1, size=17)
    stage1 = {f"league-{i}": (v, v - 0.1) for i, v in enumerate(values)}
    prior = empirical_bayes_priors(stage1, Outcome.YELLOWS)["league-0"]
    assert prior.T_prior.variance / np.var(values, ddof=1) == pytest.approx(9.0)
    assert prior.gamma_prior.variance == 2.0


@pytest.mark.parametrize(
    "stage1",
    [
        {"a": (0.1, 0.1)},
        {"a": (0.2, 0.1), "b": (0.2, 0.3)},
        {"a": (0.2, 0.1), "b": (float("nan"), 0.3)},
    ],
)
def test_empirical_bayes_errors(stage1):
    with pytest.raises(ConfigurationError):
        empirical_bayes_priors(stage1)
