"""
loader.py

Reads match CSVs into Match records.

Each file follows the canonical schema

    league,season,date,home,away,hg,ag,hy,ay

(ISO-8601 dates, empty string for a missing count). Published files with other column
names are mapped through COLUMN_ALIASES; a file without a league column takes its league
id from the file name. Every row either becomes a Match or a Rejection with a reason.

Usage:
    matches, report = load_dataset("data/raw", load_league_configs())
"""

from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from loguru import logger
import pandas as pd

from ..errors import DataError
from .config import (
    CANONICAL_COLUMNS,
    COLUMN_ALIASES,
    COUNT_COLUMNS,
    DATE_FORMAT,
    REQUIRED_COLUMNS,
)
from .match import Match


@dataclass(frozen=True)
class Rejection:
    source: str
    row: int
    reason: str


@dataclass
class IngestionReport:
    rows_in: int = 0
    matches_out: int = 0
    rejections: list = field(default_factory=list)
    counts: Counter = field(default_factory=Counter)

    def merge(self, other):
        self.rows_in += other.rows_in
        self.matches_out += other.matches_out
        self.rejections.extend(other.rejections)
        self.counts.update(other.counts)
        return self

    @property
    def balanced(self):
        return self.rows_in == self.matches_out + len(self.rejections)

    def to_dict(self):
        per_league = {}
        for (league, season), n in sorted(self.counts.items()):
            per_league.setdefault(league, {})[season] = n
        return {
            "rows_in": self.rows_in,
            "matches_out": self.matches_out,
            "rejected": len(self.rejections),
            "rejections": [vars(r) for r in self.rejections],
            "matches_per_league_season": per_league,
        }


def _parse_count(value):
    value = value.strip()
    if value == "":
        return None
    number = float(value)
    if not number.is_integer():
        raise ValueError(f"non-integer count {value!r}")
    if number < 0:
        raise ValueError(f"negative count {value!r}")
    return int(number)


def _read_frame(path):
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=REQUIRED_COLUMNS)
    df.columns = [c.strip().lower() for c in df.columns]
    df = df.rename(columns={c: COLUMN_ALIASES[c] for c in df.columns if c in COLUMN_ALIASES})

    missing = [c for c in REQUIRED_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"{path}: missing columns {missing}")
    for column in ("hy", "ay"):
        if column not in df.columns:
            df[column] = ""
    if "league" not in df.columns:
        df["league"] = Path(path).stem
    return df


def _row_to_match(row, league_config):
    league = league_config.get(row.league.strip())
    if league is None:
        raise ValueError(f"unknown league {row.league!r}")

    season = row.season.strip()
    if season not in league.season_windows:
        raise ValueError(f"season {season!r} not studied for {league.league_id}")

    try:
        day = datetime.strptime(row.date.strip(), DATE_FORMAT).date()
    except ValueError:
        raise ValueError(f"malformed date {row.date!r}") from None
    start, end = league.season_windows[season]
    if not start <= day <= end:
        raise ValueError(f"date {day} outside season {season} window")

    home, away = row.home.strip(), row.away.strip()
    if not home or not away:
        raise ValueError("blank team name")
    if home == away:
        raise ValueError(f"home and away team are both {home!r}")

    counts = {c: _parse_count(getattr(row, c)) for c in COUNT_COLUMNS}
    return Match(
        league_id=league.league_id,
        season_id=season,
        date=day,
        home_team=home,
        away_team=away,
        home_goals=counts["hg"],
        away_goals=counts["ag"],
        home_yellows=counts["hy"],
        away_yellows=counts["ay"],
    )


def sort_matches(matches):
    """Byte-stable ordering: date, then home team, then away team."""
    return sorted(matches, key=lambda m: (m.date, m.home_team, m.away_team, m.league_id))


def load_matches(path, league_config):
    """
    Read one CSV file.

    Parameters:
        path: CSV file in the canonical (or aliased) schema
        league_config: mapping league_id -> LeagueConfig; rows of other leagues are rejected

    Returns:
        (list of Match sorted by date then home team, IngestionReport)
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")

    df = _read_frame(path)
    report = IngestionReport(rows_in=len(df))
    matches = []
    # header is line 1 of the file
    for line_no, row in enumerate(df.itertuples(index=False), start=2):
        try:
            match = _row_to_match(row, league_config)
        except ValueError as e:
            report.rejections.append(Rejection(source=path.name, row=line_no, reason=str(e)))
            continue
        matches.append(match)
        report.counts[(match.league_id, match.season_id)] += 1

    report.matches_out = len(matches)
    if report.rejections:
        logger.warning(f"{path.name}: rejected {len(report.rejections)} of {report.rows_in} rows")
    logger.debug(f"{path.name}: {report.matches_out} matches")
    return sort_matches(matches), report


def load_dataset(data_dir, league_config):
    """
    Read every CSV in ``data_dir`` and combine the results.

    Returns:
        (list of Match, IngestionReport)
    """
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise DataError(f"data directory not found: {data_dir}")
    files = sorted(data_dir.glob("*.csv"))
    if not files:
        raise DataError(f"no CSV files in {data_dir}")

    matches = []
    report = IngestionReport()
    for idx, csv_path in enumerate(files, start=1):
        logger.info(f"[{idx}/{len(files)}] → {csv_path.name}")
        file_matches, file_report = load_matches(csv_path, league_config)
        matches.extend(file_matches)
        report.merge(file_report)

    logger.info(f"Loaded {report.matches_out} matches, {len(report.rejections)} rejected rows")
    return sort_matches(matches), report


def split_pre_post(matches, restart_date):
    """Partition into (before restart_date, on or after restart_date)."""
    pre, post = [], []
    for match in matches:
        (post if match.is_post(restart_date) else pre).append(match)
    return pre, post


def outcome_sample(matches, outcome):
    """Matches with both counts of ``outcome`` present."""
    return [m for m in matches if m.counts(outcome) is not None]


def matches_to_frame(matches):
    """Matches as a DataFrame in the canonical schema."""
    rows = [
        {
            "league": m.league_id,
            "season": m.season_id,
            "date": m.date.isoformat(),
            "home": m.home_team,
            "away": m.away_team,
            "hg": m.home_goals,
            "ag": m.away_goals,
            "hy": m.home_yellows,
            "ay": m.away_yellows,
        }
        for m in matches
    ]
    return pd.DataFrame(rows, columns=CANONICAL_COLUMNS)
