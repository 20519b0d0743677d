"""
main.py

Command-line interface.

Usage:
    bphaven validate --data-dir data/raw --out outputs/validate
    bphaven fit --outcome goals --cov zero --out outputs/fits
    bphaven fit --outcome yellows --cov free --out outputs/fits
    bphaven simulate --profile desk --out outputs/sim
    bphaven report --fits outputs/fits --out outputs/report
"""

from pathlib import Path
import sys
from typing import List, Optional

from loguru import logger
import typer

from ..config import DATA_DIR, OUTPUT_DIR, default_seed
from ..errors import BPHavenError
from ..sampler.config import RHAT_THRESHOLD
from .commands import RunConfig, run
from .config import DEFAULT_PROFILE, RUN_LOG

app = typer.Typer(
    help="Bayesian bivariate Poisson home-advantage fits and estimator-bias simulations.",
    no_args_is_help=True,
    add_completion=False,
)


def configure_logging(verbose, log_dir=None):
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "INFO")
    if log_dir is not None:
        Path(log_dir).mkdir(parents=True, exist_ok=True)
        logger.add(Path(log_dir) / RUN_LOG, level="DEBUG")


def _profile(profile, paper_scale):
    return "paper-scale" if paper_scale else profile


def _execute(verbose, log_to_file=True, **options):
    configure_logging(verbose)
    try:
        config = RunConfig(**options)
        if log_to_file:
            configure_logging(verbose, config.out_dir)
        logger.info(f"{config.command}: seed {config.seed}, profile {config.profile}")
        code = run(config)
    except BPHavenError as e:
        logger.error(str(e))
        raise typer.Exit(code=2)
    raise typer.Exit(code=code)


def _seed(seed):
    return seed if seed is not None else default_seed()


@app.command()
def validate(
    data_dir: Path = typer.Option(DATA_DIR, "--data-dir", help="Folder of match CSV files"),
    out: Path = typer.Option(OUTPUT_DIR / "validate", "--out", help="Output folder"),
    league_file: Optional[Path] = typer.Option(None, "--league-config", help="League metadata JSON"),
    league: List[str] = typer.Option([], "--league", help="Restrict to these league ids"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed (default: $BPHAVEN_SEED)"),
    allow_mismatch: bool = typer.Option(False, "--allow-mismatch", help="Exit 0 on count mismatches"),
    force: bool = typer.Option(False, "--force", help="Overwrite existing outputs"),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Check per-league sample sizes against the league metadata."""
    _execute(
        verbose,
        log_to_file=False,
        command="validate",
        out_dir=str(out),
        seed=_seed(seed),
        data_dir=str(data_dir),
        league_file=str(league_file) if league_file else None,
        leagues=tuple(league),
        allow_mismatch=allow_mismatch,
        force=force,
    )


@app.command()
def fit(
    data_dir: Path = typer.Option(DATA_DIR, "--data-dir", help="Folder of match CSV files"),
    out: Path = typer.Option(OUTPUT_DIR / "fits", "--out", help="Output folder"),
    outcome: str = typer.Option("goals", "--outcome", help="goals or yellows"),
    cov: Optional[str] = typer.Option(None, "--cov", help="zero or free (default: zero for goals, free for yellows)"),
    league_file: Optional[Path] = typer.Option(None, "--league-config", help="League metadata JSON"),
    league: List[str] = typer.Option([], "--league", help="Restrict to these league ids"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed (default: $BPHAVEN_SEED)"),
    profile: str = typer.Option(DEFAULT_PROFILE, "--profile", help="desk, full or paper-scale"),
    paper_scale: bool = typer.Option(
        False, "--paper-scale", "--published-scale", help="Same as --profile paper-scale"
    ),
    chains: Optional[int] = typer.Option(None, "--chains"),
    iters: Optional[int] = typer.Option(None, "--iters", help="Iterations per chain, burn-in included"),
    burnin: Optional[int] = typer.Option(None, "--burnin"),
    n_jobs: int = typer.Option(1, "--n-jobs", help="Leagues fitted in parallel"),
    bins: int = typer.Option(50, "--bins", help="Histogram bins of the density exports"),
    rhat_threshold: float = typer.Option(
        RHAT_THRESHOLD, "--rhat-threshold", help="Convergence gate on the largest r_hat"
    ),
    force: bool = typer.Option(False, "--force", help="Overwrite existing outputs"),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Fit the home-advantage model to every selected league."""
    _execute(
        verbose,
        command="fit",
        out_dir=str(out),
        seed=_seed(seed),
        data_dir=str(data_dir),
        league_file=str(league_file) if league_file else None,
        outcome=outcome,
        covariance_mode=cov,
        profile=_profile(profile, paper_scale),
        leagues=tuple(league),
        chains=chains,
        iterations=iters,
        burn_in=burnin,
        n_jobs=n_jobs,
        bins=bins,
        rhat_threshold=rhat_threshold,
        force=force,
    )


@app.command()
def simulate(
    out: Path = typer.Option(OUTPUT_DIR / "simulation", "--out", help="Output folder"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed (default: $BPHAVEN_SEED)"),
    profile: str = typer.Option(
        DEFAULT_PROFILE, "--profile", help="desk (25 seasons/cell), full or paper-scale (100)"
    ),
    paper_scale: bool = typer.Option(
        False, "--paper-scale", "--published-scale", help="Same as --profile paper-scale"
    ),
    dgp: List[str] = typer.Option([], "--dgp", help="Restrict to bvp and/or bvn"),
    t_star: List[float] = typer.Option([], "--Tstar", help="Restrict the T* axis"),
    rho_star: List[float] = typer.Option([], "--rho", help="Restrict the rho* axis"),
    chains: Optional[int] = typer.Option(None, "--chains"),
    iters: Optional[int] = typer.Option(None, "--iters"),
    burnin: Optional[int] = typer.Option(None, "--burnin"),
    n_jobs: int = typer.Option(1, "--n-jobs", help="Seasons simulated in parallel"),
    force: bool = typer.Option(False, "--force", help="Overwrite existing outputs"),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Run the estimator-bias simulation grid."""
    _execute(
        verbose,
        command="simulate",
        out_dir=str(out),
        seed=_seed(seed),
        profile=_profile(profile, paper_scale),
        dgp=tuple(dgp),
        T_star=tuple(t_star),
        rho_star=tuple(rho_star),
        chains=chains,
        iterations=iters,
        burn_in=burnin,
        n_jobs=n_jobs,
        force=force,
    )


@app.command()
def report(
    fits: Optional[Path] = typer.Option(None, "--fits", help="Folder with fit artifacts (default: --out)"),
    out: Path = typer.Option(OUTPUT_DIR / "report", "--out", help="Output folder"),
    outcome: Optional[str] = typer.Option(None, "--outcome", help="Only this outcome"),
    cov: Optional[str] = typer.Option(None, "--cov", help="Covariance mode of the fits to read"),
    league_file: Optional[Path] = typer.Option(None, "--league-config", help="League metadata JSON"),
    league: List[str] = typer.Option([], "--league", help="Restrict to these league ids"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    force: bool = typer.Option(False, "--force", help="Overwrite existing outputs"),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Consolidate fit artifacts into league tables, densities and the joint report."""
    _execute(
        verbose,
        command="report",
        out_dir=str(out),
        seed=_seed(seed),
        fit_dir=str(fits) if fits else None,
        league_file=str(league_file) if league_file else None,
        outcome=outcome,
        covariance_mode=cov,
        leagues=tuple(league),
        force=force,
    )


def main():
    app(prog_name="bphaven")


if __name__ == "__main__":
    main()
