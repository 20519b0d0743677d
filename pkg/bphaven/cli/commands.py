"""
commands.py

The four pipeline commands. Each takes a RunConfig, writes its outputs and a manifest
into ``config.out_dir`` and returns a process exit status.
"""

from dataclasses import asdict, dataclass, fields
import hashlib
import json
from pathlib import Path
from typing import Optional, Tuple
import zlib

from joblib import Parallel, delayed
from loguru import logger
import pandas as pd
from tqdm import tqdm

from .. import __version__
from ..data import load_dataset, load_league_configs, observed_correlations, validate_counts
from ..errors import ArtifactError, BPHavenError, ConfigurationError, DataError
from ..inference import (
    LeagueFitReport,
    artifact_stem,
    average_goal_scale_ha,
    decline_counts,
    dumps,
    ess_table,
    joint_quadrants,
    league_report,
    read_fit_report,
    reports_frame,
    sort_reports,
    team_strengths,
    write_csv,
    write_fit_artifacts,
    write_json,
)
from ..inference.config import DENSITY_SUFFIX
from ..model import BPPosterior, ModelSpec, build_design, default_priors, empirical_bayes_priors
from ..sampler import ChainConfig, run_chains
from ..sampler.config import RHAT_THRESHOLD
from ..simgrid import bias_frame, bias_from_estimates, default_estimators, full_grid, season_estimates
from ..simgrid.config import BVN_T_STARS, DGPS, RHO_STAR_GRID, SEASONS_PER_CELL, T_STAR_GRID
from .config import (
    COMMANDS,
    DEFAULT_COVARIANCE,
    EXECUTION_FIELDS,
    MANIFEST_TEMPLATE,
    PROFILE_ALIASES,
    PROFILES,
    STAGE1_TEMPLATE,
)


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs; recorded verbatim in the run manifest."""

    command: str
    out_dir: str
    seed: int
    data_dir: Optional[str] = None
    league_file: Optional[str] = None
    fit_dir: Optional[str] = None
    outcome: Optional[str] = None
    covariance_mode: Optional[str] = None
    profile: str = "desk"
    leagues: Tuple[str, ...] = ()
    chains: Optional[int] = None
    iterations: Optional[int] = None
    burn_in: Optional[int] = None
    n_jobs: int = 1
    dgp: Tuple[str, ...] = ()
    T_star: Tuple[float, ...] = ()
    rho_star: Tuple[float, ...] = ()
    bins: int = 50
    rhat_threshold: float = RHAT_THRESHOLD
    force: bool = False
    allow_mismatch: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}")
        object.__setattr__(self, "profile", PROFILE_ALIASES.get(self.profile, self.profile))
        if self.profile not in PROFILES:
            raise ConfigurationError(f"unknown profile {self.profile!r}; choose from {sorted(PROFILES)}")
        if self.outcome is not None and self.outcome not in DEFAULT_COVARIANCE:
            raise ConfigurationError(f"unknown outcome {self.outcome!r}")
        if self.covariance_mode is not None and self.covariance_mode not in ("zero", "free"):
            raise ConfigurationError(f"unknown covariance mode {self.covariance_mode!r}")
        if not self.rhat_threshold >= 1.0:
            raise ConfigurationError(f"r_hat threshold must be at least 1, got {self.rhat_threshold}")
        for name in ("leagues", "dgp", "T_star", "rho_star"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def to_dict(self):
        """Recorded fields; n_jobs and force only change how a run executes, not its outputs."""
        data = asdict(self)
        for name in EXECUTION_FIELDS:
            data.pop(name)
        return data

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    @property
    def config_hash(self):
        return hashlib.sha256(dumps(self.to_dict()).encode("utf-8")).hexdigest()

    def covariance_for(self, outcome):
        return self.covariance_mode or DEFAULT_COVARIANCE[outcome]

    def chain_config(self, covariance_mode, seed):
        profile = PROFILES[self.profile]["chains"][covariance_mode]
        return ChainConfig.from_profile(
            profile,
            seed,
            n_chains=self.chains,
            iterations=self.iterations,
            burn_in=self.burn_in,
        )


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def dataset_hash(data_dir):
    """SHA-256 over the names and contents of every CSV in ``data_dir``."""
    digest = hashlib.sha256()
    for path in sorted(Path(data_dir).glob("*.csv")):
        digest.update(path.name.encode("utf-8"))
        digest.update(_sha256(path).encode("ascii"))
    return digest.hexdigest()


def prepare_output(config, tag):
    """Create the output directory; refuse to reuse it for ``tag`` without --force."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = out_dir / MANIFEST_TEMPLATE.format(tag=tag)
    if manifest.exists() and not config.force:
        raise ArtifactError(f"{manifest} exists; pass --force to overwrite the outputs of this run")
    return manifest


def write_manifest(path, config, outputs, extra=None):
    manifest = {
        "command": config.command,
        "run_config": config.to_dict(),
        "config_hash": config.config_hash,
        "seed": config.seed,
        "version": __version__,
        "dataset_hash": dataset_hash(config.data_dir) if config.data_dir else None,
        "outputs": sorted(Path(p).name for p in outputs),
    }
    manifest.update(extra or {})
    write_json(path, manifest)
    logger.info(f"Manifest → {path}")
    return path


def _select_leagues(config):
    leagues = load_league_configs(config.league_file)
    if not config.leagues:
        return leagues, leagues
    unknown = sorted(set(config.leagues) - set(leagues))
    if unknown:
        raise ConfigurationError(f"unknown leagues {unknown}")
    return leagues, {k: v for k, v in leagues.items() if k in config.leagues}


def cmd_validate(config):
    """Check the dataset against the expected sample sizes; 1 on mismatch unless allowed."""
    manifest = prepare_output(config, "validate")
    all_leagues, selected = _select_leagues(config)
    matches, ingestion = load_dataset(config.data_dir, all_leagues)
    matches = [m for m in matches if m.league_id in selected]

    report = validate_counts(matches, selected)
    correlations = observed_correlations(matches)
    out_dir = Path(config.out_dir)
    outputs = [
        write_json(
            out_dir / "validation.json",
            {
                "ingestion": ingestion.to_dict(),
                "validation": report.to_dict(),
                "correlations": correlations.astype(object)
                .where(correlations.notna(), None)
                .to_dict(orient="records"),
            },
        ),
        write_csv(report.table, out_dir / "validation.csv"),
        write_csv(correlations, out_dir / "correlations.csv"),
    ]
    write_manifest(manifest, config, outputs, {"passed": report.passed})

    for mismatch in report.mismatches:
        logger.error(f"mismatch: {mismatch}")
    if report.passed or config.allow_mismatch:
        return 0
    return 1


def league_seed(seed, league_id):
    return [int(seed), zlib.crc32(league_id.encode("utf-8"))]


def fit_league(
    league,
    matches,
    outcome,
    covariance_mode,
    priors,
    chain_config,
    out_dir,
    bins,
    rhat_threshold=RHAT_THRESHOLD,
):
    """Fit one league, write its artifacts and return its LeagueFitReport."""
    spec = ModelSpec(outcome, covariance_mode, league.league_id, league.seasons, league.restart_date)
    design = build_design(matches, spec)
    posterior = BPPosterior(design, priors if priors is not None else default_priors(spec))
    logger.info(
        f"{league.league_id} {outcome}/{covariance_mode}: {design.n_matches} matches, "
        f"{design.n_slots} team-seasons, {posterior.layout.size} parameters"
    )
    draws = run_chains(posterior.target(), chain_config)
    report = league_report(league.league_id, draws, outcome, threshold=rhat_threshold)
    write_fit_artifacts(out_dir, draws, report, covariance_mode, bins=bins)
    stem = artifact_stem(league.league_id, outcome, covariance_mode)
    write_csv(team_strengths(draws), Path(out_dir) / f"{stem}.teams.csv")
    write_csv(ess_table(draws), Path(out_dir) / f"{stem}.ess.csv")
    return report


def _fit_or_missing(league, matches, outcome, covariance_mode, *rest):
    try:
        return fit_league(league, matches, outcome, covariance_mode, *rest)
    except BPHavenError as e:
        logger.error(f"{league.league_id} {outcome}/{covariance_mode} fit failed: {e}")
        return LeagueFitReport(league.league_id, outcome, missing=True)


def read_stage1(out_dir, outcome):
    path = Path(out_dir) / STAGE1_TEMPLATE.format(outcome=outcome)
    if not path.exists():
        raise ArtifactError(
            f"stage-1 estimates {path} not found; run `fit --outcome {outcome} --cov zero` first"
        )
    return {k: tuple(v) for k, v in json.loads(path.read_text(encoding="utf-8")).items()}


def write_stage1(out_dir, outcome, reports, refitted):
    """
    Merge stage-1 estimates into the outcome's stage-1 file.

    Leagues outside ``refitted`` keep their earlier estimates; a refitted league whose
    fit failed loses its entry.
    """
    path = Path(out_dir) / STAGE1_TEMPLATE.format(outcome=outcome)
    stage1 = {}
    if path.exists():
        stage1 = {k: list(v) for k, v in read_stage1(out_dir, outcome).items()}
    for league_id in refitted:
        stage1.pop(league_id, None)
    stage1.update({r.league_id: [r.T_hat, r.T_prime_hat] for r in reports if not r.missing})
    kept = sorted(set(stage1) - set(refitted))
    if kept:
        logger.info(f"stage-1 estimates kept from earlier runs: {kept}")
    return write_json(path, dict(sorted(stage1.items())))


def cmd_fit(config):
    """
    Fit every selected league.

    With lambda3 = 0 the fits use the non-informative priors and their posterior means
    are saved as stage-1 estimates. With lambda3 free the priors on T and T_prime are
    built from those stage-1 estimates, which must already exist in the output directory.
    """
    outcome = config.outcome or "goals"
    covariance_mode = config.covariance_for(outcome)
    manifest = prepare_output(config, f"fit_{outcome}_{covariance_mode}")
    all_leagues, selected = _select_leagues(config)

    priors, extra = None, {}
    if covariance_mode == "free":
        stage1 = read_stage1(config.out_dir, outcome)
        absent = sorted(set(all_leagues) - set(stage1))
        if absent:
            logger.warning(f"stage-1 estimates missing for {absent}; the prior uses {len(stage1)} leagues")
        # one shared prior for every league
        priors = next(iter(empirical_bayes_priors(stage1, outcome).values()))
        extra["stage1_leagues"] = sorted(stage1)

    matches, _ = load_dataset(config.data_dir, all_leagues)
    by_league = {k: [m for m in matches if m.league_id == k] for k in selected}
    for league_id, league_matches in by_league.items():
        if not league_matches:
            logger.warning(f"no matches for {league_id}")

    tasks = [
        (
            selected[k],
            by_league[k],
            outcome,
            covariance_mode,
            priors,
            config.chain_config(covariance_mode, league_seed(config.seed, k)),
            config.out_dir,
            config.bins,
            config.rhat_threshold,
        )
        for k in selected
    ]
    reports = Parallel(n_jobs=config.n_jobs)(
        delayed(_fit_or_missing)(*task) for task in tqdm(tasks, desc=f"{outcome} fits")
    )
    reports = sort_reports(reports)

    out_dir = Path(config.out_dir)
    tag = f"{outcome}_{covariance_mode}"
    outputs = [write_csv(reports_frame(reports), out_dir / f"league_table_{tag}.csv")]
    fitted = [r for r in reports if not r.missing]
    summary = {"decline_counts": decline_counts(reports), "missing": [r.league_id for r in reports if r.missing]}
    if outcome == "goals" and fitted:
        summary["average_goal_scale_ha"] = average_goal_scale_ha(reports)
    outputs.append(write_json(out_dir / f"summary_{tag}.json", summary))

    if covariance_mode == "zero":
        outputs.append(write_stage1(out_dir, outcome, reports, list(selected)))

    not_converged = [r.league_id for r in fitted if not r.converged]
    if not_converged:
        logger.warning(f"convergence gate failed for {not_converged}")
    extra["not_converged"] = not_converged
    write_manifest(manifest, config, outputs, extra)
    return 0


def simulation_cells(config):
    n_seasons = SEASONS_PER_CELL[PROFILES[config.profile]["seasons_per_cell"]]
    dgps = config.dgp or DGPS
    T_stars = config.T_star or T_STAR_GRID
    unknown = sorted(set(dgps) - set(DGPS))
    if unknown:
        raise ConfigurationError(f"unknown data-generating processes {unknown}")
    if "bvn" in dgps and not set(T_stars) <= set(BVN_T_STARS):
        raise ConfigurationError(f"the bvn process supports T* in {BVN_T_STARS}")
    return full_grid(n_seasons, dgps=dgps, rho_stars=config.rho_star or RHO_STAR_GRID, T_stars=T_stars)


def cmd_simulate(config):
    """Run the estimator-bias grid; writes bias_grid.csv and season_estimates.csv."""
    manifest = prepare_output(config, "simulate")
    cells = simulation_cells(config)
    overrides = {"n_chains": config.chains, "iterations": config.iterations, "burn_in": config.burn_in}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    estimates = season_estimates(
        cells, config.seed, default_estimators(overrides or None), n_jobs=config.n_jobs, progress=True
    )
    rows = bias_from_estimates(estimates)

    out_dir = Path(config.out_dir)
    outputs = [
        write_csv(bias_frame(rows), out_dir / "bias_grid.csv"),
        write_csv(estimates, out_dir / "season_estimates.csv"),
    ]
    partial = [f"{r.dgp}|{r.rho_star:g}|{r.T_star:g}|{r.estimator}" for r in rows if r.partial]
    write_manifest(manifest, config, outputs, {"partial_cells": partial, "n_cells": len(cells)})
    return 0


def _collect_reports(fit_dir, leagues, outcome, covariance_mode):
    reports, missing = [], []
    for league_id in leagues:
        try:
            reports.append(read_fit_report(fit_dir, league_id, outcome, covariance_mode))
        except ArtifactError:
            missing.append(league_id)
            reports.append(LeagueFitReport(league_id, outcome, missing=True))
    return sort_reports(reports), missing


def _collect_densities(fit_dir, reports, covariance_mode):
    frames = []
    for r in reports:
        if r.missing:
            continue
        path = Path(fit_dir) / f"{artifact_stem(r.league_id, r.outcome, covariance_mode)}.{DENSITY_SUFFIX}"
        if path.exists():
            frame = pd.read_csv(path)
            frame.insert(0, "league_id", r.league_id)
            frames.append(frame)
    return pd.concat(frames, ignore_index=True) if frames else None


def cmd_report(config):
    """Consolidate per-league fit artifacts into league tables, densities and the joint report."""
    manifest = prepare_output(config, "report")
    _, selected = _select_leagues(config)
    fit_dir = Path(config.fit_dir or config.out_dir)
    out_dir = Path(config.out_dir)
    outcomes = (config.outcome,) if config.outcome else ("goals", "yellows")

    bundle, outputs, by_outcome = {}, [], {}
    for outcome in outcomes:
        covariance_mode = config.covariance_for(outcome)
        reports, missing = _collect_reports(fit_dir, list(selected), outcome, covariance_mode)
        if len(missing) == len(reports):
            logger.warning(f"no {outcome} fits found in {fit_dir}; {outcome} left out of the report")
            continue
        if missing:
            logger.warning(f"{outcome}: missing fits for {missing}")
        by_outcome[outcome] = reports
        tag = f"{outcome}_{covariance_mode}"
        outputs.append(write_csv(reports_frame(reports), out_dir / f"league_table_{tag}.csv"))
        densities = _collect_densities(fit_dir, reports, covariance_mode)
        if densities is not None:
            outputs.append(write_csv(densities, out_dir / f"densities_{tag}.csv"))
        section = {
            "covariance_mode": covariance_mode,
            "leagues": [r.to_dict() for r in reports],
            "missing": missing,
            "decline_counts": decline_counts(reports),
        }
        if outcome == "goals":
            section["average_goal_scale_ha"] = average_goal_scale_ha(reports)
        bundle[outcome] = section

    if not by_outcome:
        raise ArtifactError(f"no fit artifacts in {fit_dir}")
    if {"goals", "yellows"} <= set(by_outcome):
        try:
            arrows, counts = joint_quadrants(by_outcome["goals"], by_outcome["yellows"])
        except DataError as e:
            logger.warning(f"joint report skipped: {e}")
        else:
            outputs.append(write_csv(arrows, out_dir / "arrows.csv"))
            bundle["quadrants"] = counts
    else:
        logger.warning("joint goals / yellow-cards report needs fits of both outcomes")

    outputs.append(write_json(out_dir / "report.json", bundle))
    write_manifest(manifest, config, outputs)
    return 0


COMMAND_FUNCTIONS = {
    "validate": cmd_validate,
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "report": cmd_report,
}


def run(config):
    return COMMAND_FUNCTIONS[config.command](config)
