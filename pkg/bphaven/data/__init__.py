"""
bphaven.data

Match ingestion, restart-date splits and dataset validation.
Exposes main user-facing functions for easy import.
"""

from .leagues import ExpectedCounts, LeagueConfig, load_league_configs
from .loader import (
    IngestionReport,
    Rejection,
    load_dataset,
    load_matches,
    matches_to_frame,
    outcome_sample,
    split_pre_post,
)
from .match import Match
from .validation import ValidationReport, observed_correlations, validate_counts

__all__ = [
    "ExpectedCounts",
    "LeagueConfig",
    "load_league_configs",
    "IngestionReport",
    "Rejection",
    "load_dataset",
    "load_matches",
    "matches_to_frame",
    "outcome_sample",
    "split_pre_post",
    "Match",
    "ValidationReport",
    "observed_correlations",
    "validate_counts",
]
