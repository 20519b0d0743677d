"""
bphaven.simgrid

Simulation study of home-advantage estimators on synthetic seasons.
"""

from .estimators import (
    PairedComparison,
    fit_bvp_model,
    fit_ols_fixed_effects,
    fit_paired_comparison,
    fixed_effects_design,
    least_squares,
)
from .generate import (
    SimSeason,
    TeamStrengths,
    gen_team_strengths,
    schedule_double_round_robin,
    simulate_bvn,
    simulate_bvp,
)
from .grid import (
    BiasRow,
    SimCell,
    bias_frame,
    bias_from_estimates,
    bias_grid,
    default_estimators,
    full_grid,
    run_season,
    season_estimates,
    season_seeds,
    simulate_cell_season,
)

__all__ = [
    "BiasRow",
    "PairedComparison",
    "SimCell",
    "SimSeason",
    "TeamStrengths",
    "bias_frame",
    "bias_from_estimates",
    "bias_grid",
    "default_estimators",
    "fit_bvp_model",
    "fit_ols_fixed_effects",
    "fit_paired_comparison",
    "fixed_effects_design",
    "full_grid",
    "gen_team_strengths",
    "least_squares",
    "run_season",
    "schedule_double_round_robin",
    "season_estimates",
    "season_seeds",
    "simulate_bvn",
    "simulate_bvp",
    "simulate_cell_season",
]
