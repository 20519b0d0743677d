from importlib import resources

# Canonical CSV schema
CANONICAL_COLUMNS = ["league", "season", "date", "home", "away", "hg", "ag", "hy", "ay"]
REQUIRED_COLUMNS = ["season", "date", "home", "away", "hg", "ag"]
COUNT_COLUMNS = ["hg", "ag", "hy", "ay"]

# Column names seen in the published dataset, mapped onto the canonical schema
COLUMN_ALIASES = {
    "league_id": "league",
    "season_id": "season",
    "match_date": "date",
    "home_team": "home",
    "away_team": "away",
    "home_score": "hg",
    "away_score": "ag",
    "home_goals": "hg",
    "away_goals": "ag",
    "home_yellow_cards": "hy",
    "away_yellow_cards": "ay",
    "home_yellows": "hy",
    "away_yellows": "ay",
    "home_yc": "hy",
    "away_yc": "ay",
}

DATE_FORMAT = "%Y-%m-%d"

# League metadata shipped with the package (restart dates, season windows, expected counts)
DEFAULT_LEAGUES_FILE = resources.files("bphaven.data") / "leagues.json"
