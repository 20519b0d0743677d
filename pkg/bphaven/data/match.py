from dataclasses import dataclass
from datetime import date
from typing import Optional


@dataclass(frozen=True)
class Match:
    """One league game with its goal and yellow-card counts (None when missing)."""

    league_id: str
    season_id: str
    date: date
    home_team: str
    away_team: str
    home_goals: Optional[int] = None
    away_goals: Optional[int] = None
    home_yellows: Optional[int] = None
    away_yellows: Optional[int] = None

    def __post_init__(self):
        if self.home_team == self.away_team:
            raise ValueError(f"home and away team are both {self.home_team!r}")

    @property
    def has_goals(self):
        return self.home_goals is not None and self.away_goals is not None

    @property
    def has_yellows(self):
        return self.home_yellows is not None and self.away_yellows is not None

    def counts(self, outcome):
        """(home, away) counts for ``outcome`` ("goals" or "yellows"), None if missing."""
        if str(outcome) == "goals":
            return (self.home_goals, self.away_goals) if self.has_goals else None
        if str(outcome) == "yellows":
            return (self.home_yellows, self.away_yellows) if self.has_yellows else None
        raise ValueError(f"unknown outcome {outcome!r}")

    def is_post(self, restart_date):
        """Games on or after the restart date are post-restart."""
        return self.date >= restart_date
