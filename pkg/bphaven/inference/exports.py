"""
exports.py

Density tables and per-fit artifact files.

A fit of league L for outcome O with covariance mode C is written as
L_O_C.summary.csv, L_O_C.density.csv, L_O_C.draws.csv and L_O_C.report.json.
"""

import json
import math
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import ArtifactError, ConfigurationError
from ..sampler import PosteriorDraws, diagnostics_frame
from .config import (
    DEFAULT_BINS,
    DENSITY_PARAMETERS,
    DENSITY_SUFFIX,
    DIFFERENCE_NAME,
    DRAWS_SUFFIX,
    MIN_BINS,
    REPORT_SUFFIX,
    SUMMARY_SUFFIX,
)
from .reports import LeagueFitReport


def density_export(draws, bins=DEFAULT_BINS, parameters=DENSITY_PARAMETERS):
    """
    Normalised histograms of T, T_prime and their difference.

    Returns:
        (table, difference) where table has columns parameter, left, width, height with
        heights integrating to 1 per parameter, and difference is the pooled
        T - T_prime draw vector
    """
    if bins < MIN_BINS:
        raise ConfigurationError(f"density export needs at least {MIN_BINS} bins, got {bins}")
    if draws.n_draws == 0:
        raise ValueError("no draws to export")

    series = {name: draws.pooled(name) for name in parameters}
    difference = series["T"] - series["T_prime"]
    series[DIFFERENCE_NAME] = difference

    frames = []
    for name, values in series.items():
        heights, edges = np.histogram(values, bins=bins, density=True)
        frames.append(
            pd.DataFrame(
                {"parameter": name, "left": edges[:-1], "width": np.diff(edges), "height": heights}
            )
        )
    return pd.concat(frames, ignore_index=True), difference


def artifact_stem(league_id, outcome, covariance_mode):
    return f"{league_id}_{outcome}_{covariance_mode}"


def _clean(value):
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Path):
        return str(value)
    return value


def dumps(obj):
    """JSON text with sorted keys; NaN and inf become null."""
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def write_csv(frame, path):
    path = Path(path)
    frame.to_csv(path, index=False)
    return path


def write_fit_artifacts(out_dir, draws, report, covariance_mode, bins=DEFAULT_BINS):
    """Write the four artifact files of one fit; returns their paths by suffix."""
    out_dir = Path(out_dir)
    stem = artifact_stem(report.league_id, report.outcome, covariance_mode)
    density, _ = density_export(draws, bins=bins)
    return {
        SUMMARY_SUFFIX: write_csv(diagnostics_frame(draws).reset_index(), out_dir / f"{stem}.{SUMMARY_SUFFIX}"),
        DENSITY_SUFFIX: write_csv(density, out_dir / f"{stem}.{DENSITY_SUFFIX}"),
        DRAWS_SUFFIX: draws.to_csv(out_dir / f"{stem}.{DRAWS_SUFFIX}"),
        REPORT_SUFFIX: write_json(out_dir / f"{stem}.{REPORT_SUFFIX}", report.to_dict()),
    }


def read_fit_report(out_dir, league_id, outcome, covariance_mode):
    path = Path(out_dir) / f"{artifact_stem(league_id, outcome, covariance_mode)}.{REPORT_SUFFIX}"
    if not path.exists():
        raise ArtifactError(f"missing fit report {path}")
    return LeagueFitReport.from_dict(json.loads(path.read_text(encoding="utf-8")))


def read_fit_draws(out_dir, league_id, outcome, covariance_mode):
    path = Path(out_dir) / f"{artifact_stem(league_id, outcome, covariance_mode)}.{DRAWS_SUFFIX}"
    if not path.exists():
        raise ArtifactError(f"missing draws file {path}")
    return PosteriorDraws.read_csv(path)
