# Configuration for bphaven
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Project root directory
BASE_DIR = Path.cwd()

# Data directories
DATA_DIR = Path(os.getenv("BPHAVEN_DATA_DIR", BASE_DIR / "data" / "raw"))
OUTPUT_DIR = Path(os.getenv("BPHAVEN_OUTPUT_DIR", BASE_DIR / "outputs"))

# Seed used when neither --seed nor BPHAVEN_SEED is given
FALLBACK_SEED = 20201028
SEED_ENV_VAR = "BPHAVEN_SEED"


def default_seed():
    """Seed from the environment (BPHAVEN_SEED) or the project fallback."""
    value = os.getenv(SEED_ENV_VAR)
    if value is None or not value.strip():
        return FALLBACK_SEED
    return int(value)
