"""
bphaven.inference

Reported quantities from posterior draws: league tables, decline probabilities,
goals-per-game home advantage, densities and the joint goals / yellow-cards report.
"""

from .exports import (
    artifact_stem,
    density_export,
    dumps,
    read_fit_draws,
    read_fit_report,
    write_csv,
    write_fit_artifacts,
    write_json,
)
from .reports import (
    LeagueFitReport,
    average_goal_scale_ha,
    decline_counts,
    ess_table,
    goal_scale_ha,
    joint_quadrants,
    league_report,
    league_table,
    pct_change,
    prob_ha_decline,
    reports_frame,
    sort_reports,
    team_strengths,
)

__all__ = [
    "LeagueFitReport",
    "artifact_stem",
    "average_goal_scale_ha",
    "decline_counts",
    "density_export",
    "dumps",
    "ess_table",
    "goal_scale_ha",
    "joint_quadrants",
    "league_report",
    "league_table",
    "pct_change",
    "prob_ha_decline",
    "read_fit_draws",
    "read_fit_report",
    "reports_frame",
    "sort_reports",
    "team_strengths",
    "write_csv",
    "write_fit_artifacts",
    "write_json",
]
