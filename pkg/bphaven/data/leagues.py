"""
leagues.py

League metadata: restart dates, studied seasons with their date windows, and the
sample sizes each league is expected to produce.
"""

from dataclasses import dataclass, field
from datetime import date
import json
from pathlib import Path
from typing import Dict, Optional, Tuple

from ..errors import ConfigurationError, DataError
from .config import DEFAULT_LEAGUES_FILE


@dataclass(frozen=True)
class ExpectedCounts:
    pre_goals: int
    post_goals: int
    pre_yellows: int
    post_yellows: int
    team_seasons: int


@dataclass(frozen=True)
class LeagueConfig:
    league_id: str
    country: str
    tier: int
    restart_date: date
    display_name: str
    season_windows: Dict[str, Tuple[date, date]] = field(default_factory=dict)
    expected: Optional[ExpectedCounts] = None

    def __post_init__(self):
        if self.restart_date is None:
            raise ConfigurationError(f"league {self.league_id!r} has no restart date")
        if not self.season_windows:
            raise ConfigurationError(f"league {self.league_id!r} has no seasons")

    @property
    def seasons(self):
        """Studied seasons in chronological order."""
        return tuple(sorted(self.season_windows, key=lambda s: self.season_windows[s][0]))


def _parse_window(pair):
    start, end = (date.fromisoformat(v) for v in pair)
    if end < start:
        raise ConfigurationError(f"season window ends before it starts: {pair}")
    return start, end


def load_league_configs(path=None):
    """
    Read league metadata from a JSON file (the packaged Table of 17 leagues by default).

    Returns:
        dict mapping league_id -> LeagueConfig, in file order
    """
    source = Path(path) if path is not None else DEFAULT_LEAGUES_FILE
    try:
        raw = json.loads(source.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"cannot read league config {source}: {e}") from e

    calendars = {
        "split_year": raw.get("split_year_windows", {}),
        "calendar_year": raw.get("calendar_year_windows", {}),
    }

    leagues = {}
    for entry in raw["leagues"]:
        windows = dict(calendars.get(entry.get("calendar", "split_year"), {}))
        windows.update(entry.get("season_windows", {}))
        expected = entry.get("expected")
        config = LeagueConfig(
            league_id=entry["league_id"],
            country=entry.get("country", ""),
            tier=int(entry.get("tier", 1)),
            restart_date=date.fromisoformat(entry["restart_date"]),
            display_name=entry.get("display_name", entry["league_id"]),
            season_windows={s: _parse_window(w) for s, w in windows.items()},
            expected=ExpectedCounts(**expected) if expected else None,
        )
        if config.league_id in leagues:
            raise ConfigurationError(f"duplicate league id {config.league_id!r}")
        leagues[config.league_id] = config
    return leagues
