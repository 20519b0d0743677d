"""
design.py

Maps a league's matches onto parameter slots: one mu slot per season and one
team-season slot per (season, team) for every effect family.
"""

from dataclasses import dataclass
from typing import Tuple

from loguru import logger
import numpy as np

from ..errors import DesignError


@dataclass(frozen=True)
class Design:
    spec: object
    y_home: np.ndarray
    y_away: np.ndarray
    home_slot: np.ndarray
    away_slot: np.ndarray
    season_slot: np.ndarray
    post: np.ndarray
    slot_labels: Tuple[Tuple[str, str], ...]
    slot_season: np.ndarray

    @property
    def seasons(self):
        return self.spec.seasons

    @property
    def n_matches(self):
        return len(self.y_home)

    @property
    def n_slots(self):
        return len(self.slot_labels)

    @property
    def n_seasons(self):
        return len(self.spec.seasons)


def _frozen(array, dtype):
    out = np.ascontiguousarray(array, dtype=dtype)
    out.setflags(write=False)
    return out


def build_design(matches, spec, teams=None):
    """
    Index matches for the model in ``spec``.

    Matches missing the counts of ``spec.outcome`` are left out of the design.

    Parameters:
        matches: list of Match from the spec's league and seasons
        spec: ModelSpec
        teams: optional mapping season -> team names expected to have a slot; a listed
            team with no match in that season is a degenerate slot

    Returns:
        Design with dense team-season slots ordered by season, then team name
    """
    season_index = {s: i for i, s in enumerate(spec.seasons)}

    rows = []
    skipped = 0
    for match in matches:
        if match.league_id != spec.league_id:
            raise DesignError(f"match from league {match.league_id!r} in a {spec.league_id!r} design")
        if match.season_id not in season_index:
            raise DesignError(f"unknown season {match.season_id!r} for {spec.league_id}")
        counts = match.counts(spec.outcome)
        if counts is None:
            skipped += 1
            continue
        rows.append((match, counts))
    if skipped:
        logger.debug(f"{spec.league_id}: {skipped} matches without {spec.outcome} counts left out")
    if not rows:
        raise DesignError(f"no {spec.outcome} matches for {spec.league_id}")

    seen = {}
    for match, _ in rows:
        for team in (match.home_team, match.away_team):
            seen.setdefault(match.season_id, set()).add(team)
    empty = [s for s in spec.seasons if s not in seen]
    if empty:
        raise DesignError(f"{spec.league_id}: no {spec.outcome} matches in seasons {empty}")
    if teams is not None:
        for season, names in teams.items():
            idle = sorted(set(names) - seen.get(season, set()))
            if idle:
                raise DesignError(f"{spec.league_id} {season}: no matches for {idle}")

    slot_labels = tuple(
        (season, team) for season in spec.seasons for team in sorted(seen.get(season, ()))
    )
    slot_index = {label: i for i, label in enumerate(slot_labels)}

    post = np.array(
        [spec.has_post and match.is_post(spec.restart_date) for match, _ in rows], dtype=bool
    )
    if spec.has_post:
        last = spec.seasons[-1]
        stray = sorted({m.season_id for (m, _), p in zip(rows, post) if p and m.season_id != last})
        if stray:
            raise DesignError(f"restart date {spec.restart_date} falls before seasons {stray}")
        if not post.any():
            raise DesignError(f"restart date {spec.restart_date} is after the last {last} match")

    return Design(
        spec=spec,
        y_home=_frozen([c[0] for _, c in rows], np.int64),
        y_away=_frozen([c[1] for _, c in rows], np.int64),
        home_slot=_frozen([slot_index[(m.season_id, m.home_team)] for m, _ in rows], np.int64),
        away_slot=_frozen([slot_index[(m.season_id, m.away_team)] for m, _ in rows], np.int64),
        season_slot=_frozen([season_index[m.season_id] for m, _ in rows], np.int64),
        post=_frozen(post, bool),
        slot_labels=slot_labels,
        slot_season=_frozen([season_index[s] for s, _ in slot_labels], np.int64),
    )
