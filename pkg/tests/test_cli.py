import json
import sys

from loguru import logger
import pandas as pd
import pytest
from typer.testing import CliRunner

from bphaven.cli.commands import RunConfig, league_seed
from bphaven.cli.main import app
from bphaven.errors import ConfigurationError

from conftest import write_dataset

runner = CliRunner()
QUICK = ["--chains", "2", "--iters", "200", "--burnin", "100", "--seed", "11"]


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    logger.remove()
    logger.add(sys.stderr)


@pytest.fixture
def dataset(tmp_path):
    return write_dataset(tmp_path)


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def fit(dataset, out, outcome, cov, *extra):
    data_dir, league_file = dataset
    return invoke(
        "fit", "--data-dir", data_dir, "--league-config", league_file, "--out", out,
        "--outcome", outcome, "--cov", cov, "--bins", 10, *QUICK, *extra,
    )


def test_run_config_round_trip():
    config = RunConfig(command="fit", out_dir="out", seed=3, outcome="goals", leagues=["b", "a"], n_jobs=4)
    data = json.loads(json.dumps(config.to_dict()))
    assert "n_jobs" not in data and "force" not in data
    back = RunConfig.from_dict({**data, "retired_option": 1})
    assert back.leagues == ("b", "a")
    assert back.config_hash == config.config_hash
    assert RunConfig(command="fit", out_dir="out", seed=3, outcome="goals", leagues=["b", "a"]).config_hash == config.config_hash
    assert RunConfig(command="fit", out_dir="out", seed=4, outcome="goals", leagues=["b", "a"]).config_hash != config.config_hash


def test_run_config_rejects_unknown_values():
    with pytest.raises(ConfigurationError):
        RunConfig(command="plot", out_dir="out", seed=1)
    with pytest.raises(ConfigurationError):
        RunConfig(command="fit", out_dir="out", seed=1, outcome="corners")
    with pytest.raises(ConfigurationError):
        RunConfig(command="fit", out_dir="out", seed=1, profile="laptop")


def test_covariance_defaults_and_chain_profiles():
    config = RunConfig(command="fit", out_dir="out", seed=1, profile="full")
    assert config.covariance_for("goals") == "zero"
    assert config.covariance_for("yellows") == "free"
    assert config.chain_config("free", 1).iterations == 20000
    assert RunConfig(command="fit", out_dir="out", seed=1).chain_config("zero", 1).iterations == 3000


def test_league_seeds_differ_by_league():
    assert league_seed(5, "a") == league_seed(5, "a")
    assert league_seed(5, "a") != league_seed(5, "b")


def test_validate(dataset, tmp_path):
    data_dir, league_file = dataset
    out = tmp_path / "validate"
    result = invoke("validate", "--data-dir", data_dir, "--league-config", league_file, "--out", out)
    assert result.exit_code == 0, result.output
    report = json.loads((out / "validation.json").read_text())
    assert report["validation"]["passed"]
    assert report["ingestion"]["rows_in"] == 48
    manifest = json.loads((out / "manifest.validate.json").read_text())
    assert manifest["outputs"] == ["correlations.csv", "validation.csv", "validation.json"]
    assert manifest["config_hash"] == RunConfig.from_dict(manifest["run_config"]).config_hash
    assert manifest["dataset_hash"]

    # same output folder again without --force
    again = invoke("validate", "--data-dir", data_dir, "--league-config", league_file, "--out", out)
    assert again.exit_code == 2


def test_validate_mismatch_exit_codes(dataset, tmp_path):
    data_dir, league_file = dataset
    config = json.loads(league_file.read_text())
    config["leagues"][0]["expected"]["pre_goals"] += 1
    league_file.write_text(json.dumps(config))
    out = tmp_path / "validate"
    args = ["validate", "--data-dir", data_dir, "--league-config", league_file, "--out", out]
    assert invoke(*args).exit_code == 1
    assert invoke(*args, "--allow-mismatch", "--force").exit_code == 0


def test_validate_without_data(tmp_path):
    result = invoke("validate", "--data-dir", tmp_path / "missing", "--out", tmp_path / "out")
    assert result.exit_code == 2


def test_stage_two_needs_stage_one(dataset, tmp_path):
    assert fit(dataset, tmp_path / "fits", "yellows", "free").exit_code == 2


def test_fit_then_report(dataset, tmp_path):
    fits = tmp_path / "fits"
    for outcome in ("goals", "yellows"):
        result = fit(dataset, fits, outcome, "zero")
        assert result.exit_code == 0, result.output

    for league in ("alpha-league", "beta-league"):
        for suffix in ("summary.csv", "density.csv", "draws.csv", "report.json", "teams.csv", "ess.csv"):
            assert (fits / f"{league}_goals_zero.{suffix}").exists()
    stage1 = json.loads((fits / "stage1_goals.json").read_text())
    assert sorted(stage1) == ["alpha-league", "beta-league"]
    table = pd.read_csv(fits / "league_table_goals_zero.csv")
    assert len(table) == 2 and not table["missing"].any()

    # stage 2 reads the stage-1 estimates from the same folder
    result = fit(dataset, fits, "goals", "free")
    assert result.exit_code == 0, result.output
    assert (fits / "alpha-league_goals_free.report.json").exists()

    _, league_file = dataset
    out = tmp_path / "report"
    result = invoke("report", "--fits", fits, "--out", out, "--cov", "zero", "--league-config", league_file)
    assert result.exit_code == 0, result.output
    arrows = pd.read_csv(out / "arrows.csv")
    assert sorted(arrows["league_id"]) == ["alpha-league", "beta-league"]
    bundle = json.loads((out / "report.json").read_text())
    assert sum(bundle["quadrants"].values()) == 2
    assert bundle["goals"]["average_goal_scale_ha"]["n_leagues"] == 2
    densities = pd.read_csv(out / "densities_goals_zero.csv")
    assert set(densities["league_id"]) == {"alpha-league", "beta-league"}


def test_same_seed_same_artifacts(dataset, tmp_path):
    for out in ("first", "second"):
        assert fit(dataset, tmp_path / out, "goals", "zero").exit_code == 0
    for name in ("alpha-league_goals_zero.draws.csv", "alpha-league_goals_zero.report.json", "league_table_goals_zero.csv"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_report_without_fits(dataset, tmp_path):
    _, league_file = dataset
    result = invoke("report", "--fits", tmp_path / "empty", "--out", tmp_path / "report", "--league-config", league_file)
    assert result.exit_code == 2


@pytest.mark.slow
def test_simulate_single_cell(tmp_path):
    out = tmp_path / "sim"
    result = invoke(
        "simulate", "--out", out, "--dgp", "bvp", "--Tstar", "0", "--rho", "0",
        "--chains", 2, "--iters", 300, "--burnin", 100, "--seed", 3,
    )
    assert result.exit_code == 0, result.output
    grid = pd.read_csv(out / "bias_grid.csv")
    assert sorted(grid["estimator"]) == ["bivariate_poisson", "linear_regression", "paired_comparison"]
    assert (grid["MAB"] >= grid["MB"].abs()).all()
    estimates = pd.read_csv(out / "season_estimates.csv")
    assert len(estimates) == 3 * 25


def test_simulate_rejects_unsupported_bvn_home_advantage(tmp_path):
    result = invoke("simulate", "--out", tmp_path / "sim", "--dgp", "bvn", "--Tstar", "0.3")
    assert result.exit_code == 2


def test_paper_scale_profile_and_alias():
    config = RunConfig(command="fit", out_dir="out", seed=1, profile="paper-scale")
    assert config.chain_config("zero", 1).iterations == 7000
    assert config.chain_config("free", 1).iterations == 20000
    assert RunConfig(command="fit", out_dir="out", seed=1, profile="published").profile == "paper-scale"


@pytest.mark.parametrize("flag", [["--paper-scale"], ["--profile", "paper-scale"], ["--published-scale"]])
def test_fit_accepts_paper_scale(dataset, tmp_path, flag):
    out = tmp_path / "fits"
    result = fit(dataset, out, "goals", "zero", "--league", "alpha-league", *flag)
    assert result.exit_code == 0, result.output
    manifest = json.loads((out / "manifest.fit_goals_zero.json").read_text())
    assert manifest["run_config"]["profile"] == "paper-scale"


@pytest.mark.parametrize(
    "extra",
    [
        ["--profile", "laptop"],
        ["--outcome", "corners"],
        ["--cov", "maybe"],
        ["--rhat-threshold", "0.5"],
    ],
)
def test_bad_fit_options_exit_cleanly(tmp_path, extra):
    result = invoke("fit", "--out", tmp_path / "fits", *extra)
    assert result.exit_code == 2
    assert not isinstance(result.exception, ConfigurationError)
    assert not (tmp_path / "fits").exists()


def test_refitting_one_league_keeps_other_stage_one_estimates(dataset, tmp_path):
    fits = tmp_path / "fits"
    assert fit(dataset, fits, "goals", "zero").exit_code == 0
    before = json.loads((fits / "stage1_goals.json").read_text())

    result = fit(dataset, fits, "goals", "zero", "--league", "alpha-league", "--force")
    assert result.exit_code == 0, result.output
    after = json.loads((fits / "stage1_goals.json").read_text())
    assert sorted(after) == ["alpha-league", "beta-league"]
    assert after == before

    result = fit(dataset, fits, "goals", "free")
    assert result.exit_code == 0, result.output
    manifest = json.loads((fits / "manifest.fit_goals_free.json").read_text())
    assert manifest["stage1_leagues"] == ["alpha-league", "beta-league"]


def test_rhat_threshold_sets_the_convergence_gate(dataset, tmp_path):
    out = tmp_path / "fits"
    result = fit(dataset, out, "goals", "zero", "--rhat-threshold", 1000)
    assert result.exit_code == 0, result.output
    table = pd.read_csv(out / "league_table_goals_zero.csv")
    assert table["converged"].all()
    manifest = json.loads((out / "manifest.fit_goals_zero.json").read_text())
    assert manifest["run_config"]["rhat_threshold"] == 1000
    assert manifest["not_converged"] == []
