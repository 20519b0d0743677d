"""
grid.py

The estimator-bias grid: every (process, rho*, T*) cell simulates independent seasons,
runs each estimator on them and reports mean bias and mean absolute bias against the
cell's true home advantage on the goal-difference scale.
"""

from dataclasses import asdict, dataclass
from functools import partial
import itertools
import math
from typing import Optional
import zlib

from joblib import Parallel, delayed
from loguru import logger
import numpy as np
import pandas as pd
from tqdm import tqdm

from ..errors import ConfigurationError
from .config import DGPS, N_TEAMS, RHO_STAR_GRID, SEASONS_PER_CELL, T_STAR_GRID
from .estimators import fit_bvp_model, fit_ols_fixed_effects, fit_paired_comparison
from .generate import gen_team_strengths, simulate_bvn, simulate_bvp

_SIMULATORS = {"bvp": simulate_bvp, "bvn": simulate_bvn}


@dataclass(frozen=True)
class SimCell:
    dgp: str
    rho_star: float
    T_star: float
    n_seasons: int = SEASONS_PER_CELL["full"]
    n_teams: int = N_TEAMS
    seed: Optional[int] = None

    def __post_init__(self):
        if self.dgp not in DGPS:
            raise ConfigurationError(f"unknown data-generating process {self.dgp!r}")
        if not -1.0 < self.rho_star <= 0.0:
            raise ConfigurationError(f"rho_star must lie in (-1, 0], got {self.rho_star}")
        if self.T_star < 0:
            raise ConfigurationError(f"T_star must be >= 0, got {self.T_star}")
        if self.n_teams < 2 or self.n_teams % 2:
            raise ConfigurationError(f"n_teams must be even and >= 2, got {self.n_teams}")
        if self.n_seasons < 1:
            raise ConfigurationError(f"n_seasons must be >= 1, got {self.n_seasons}")

    @property
    def truth(self):
        """Goal-difference home advantage: e^T* - 1 under bvp, T* under bvn."""
        if self.dgp == "bvp":
            return math.expm1(self.T_star)
        return self.T_star

    @property
    def key(self):
        return f"{self.dgp}|{self.rho_star:g}|{self.T_star:g}"


@dataclass(frozen=True)
class BiasRow:
    dgp: str
    rho_star: float
    T_star: float
    estimator: str
    MAB: float
    MB: float
    n_seasons: int
    n_failed: int = 0

    @property
    def partial(self):
        return self.n_failed > 0

    def to_dict(self):
        return {**asdict(self), "partial": self.partial}


def full_grid(n_seasons, n_teams=N_TEAMS, dgps=DGPS, rho_stars=RHO_STAR_GRID, T_stars=T_STAR_GRID):
    """Cells ordered by process, then rho*, then T*."""
    return [
        SimCell(dgp, rho, T, n_seasons=n_seasons, n_teams=n_teams)
        for dgp, rho, T in itertools.product(dgps, rho_stars, T_stars)
    ]


def season_seeds(cell, season_index, master_seed):
    """Independent data, bivariate-Poisson-fit and paired-fit seed streams of one season."""
    seed = cell.seed if cell.seed is not None else master_seed
    root = np.random.SeedSequence([seed, zlib.crc32(cell.key.encode()), season_index])
    return root.spawn(3)


def _entropy(seed_seq):
    return [int(v) for v in seed_seq.generate_state(4)]


def _linear_regression(season, seed=None):
    return fit_ols_fixed_effects(season)


def default_estimators(chains=None):
    """
    Name -> callable(season, seed) for the three compared estimators.

    ``chains`` overrides the simulation chain lengths of the two Bayesian fits.
    """
    return {
        "bivariate_poisson": partial(fit_bvp_model, chains=chains),
        "linear_regression": _linear_regression,
        "paired_comparison": partial(fit_paired_comparison, chains=chains),
    }


def simulate_cell_season(cell, season_index, master_seed):
    data_seed, _, _ = season_seeds(cell, season_index, master_seed)
    rng = np.random.default_rng(data_seed)
    strengths = gen_team_strengths(cell.rho_star, cell.n_teams, rng)
    return _SIMULATORS[cell.dgp](strengths, cell.T_star, rng)


def run_season(cell, season_index, master_seed, estimators):
    """Simulate one season of a cell and apply every estimator; failures give NaN rows."""
    season = simulate_cell_season(cell, season_index, master_seed)
    _, bvp_seed, paired_seed = season_seeds(cell, season_index, master_seed)
    fit_seeds = {"bivariate_poisson": bvp_seed, "paired_comparison": paired_seed}
    rows = []
    for name, estimator in estimators.items():
        seed = fit_seeds.get(name, bvp_seed)
        try:
            estimate, error = float(estimator(season, _entropy(seed))), None
        except Exception as e:
            logger.warning(f"{cell.key} season {season_index}: {name} failed: {e}")
            estimate, error = math.nan, f"{type(e).__name__}: {e}"
        rows.append(
            {
                "dgp": cell.dgp,
                "rho_star": cell.rho_star,
                "T_star": cell.T_star,
                "season": season_index,
                "estimator": name,
                "estimate": estimate,
                "truth": cell.truth,
                "error": error,
            }
        )
    return rows


def season_estimates(cells, master_seed, estimators=None, n_jobs=1, progress=False):
    """
    Per-season estimates of every estimator in every cell.

    Each (cell, season) draws from its own seed streams, so the table is the same for
    any ``n_jobs``.
    """
    estimators = estimators if estimators is not None else default_estimators()
    tasks = [(cell, i) for cell in cells for i in range(cell.n_seasons)]
    logger.info(f"simulating {len(tasks)} seasons over {len(cells)} cells with {len(estimators)} estimators")
    results = Parallel(n_jobs=n_jobs)(
        delayed(run_season)(cell, i, master_seed, estimators)
        for cell, i in tqdm(tasks, desc="seasons", disable=not progress)
    )
    columns = ["dgp", "rho_star", "T_star", "season", "estimator", "estimate", "truth", "error"]
    return pd.DataFrame([row for rows in results for row in rows], columns=columns)


def bias_from_estimates(estimates):
    """BiasRows of a season_estimates table, in the table's cell and estimator order."""
    rows = []
    keys = ["dgp", "rho_star", "T_star", "estimator"]
    for (dgp, rho, T, name), group in estimates.groupby(keys, sort=False):
        ok = group[group["error"].isna()]
        err = ok["estimate"] - ok["truth"]
        n_failed = len(group) - len(ok)
        if n_failed:
            logger.warning(f"{dgp}|{rho:g}|{T:g} {name}: {n_failed} of {len(group)} seasons failed")
        rows.append(
            BiasRow(
                dgp=dgp,
                rho_star=float(rho),
                T_star=float(T),
                estimator=name,
                MAB=float(err.abs().mean()) if len(err) else math.nan,
                MB=float(err.mean()) if len(err) else math.nan,
                n_seasons=len(ok),
                n_failed=n_failed,
            )
        )
    return rows


def bias_grid(cells, master_seed=0, estimators=None, n_jobs=1, progress=False):
    """Mean absolute bias and mean bias of every estimator in every cell."""
    return bias_from_estimates(season_estimates(cells, master_seed, estimators, n_jobs, progress))


def bias_frame(rows):
    columns = ["dgp", "rho_star", "T_star", "estimator", "MAB", "MB", "n_seasons", "n_failed", "partial"]
    return pd.DataFrame([r.to_dict() for r in rows], columns=columns)
