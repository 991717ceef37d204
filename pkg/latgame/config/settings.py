"""Configuration settings for latgame."""
import os
from pathlib import Path

from dotenv import load_dotenv


# Load environment variables from .env file if it exists
load_dotenv()

# Base directories
BASE_DIR = Path(__file__).resolve().parent.parent.parent  # Project root
DATA_DIR = os.getenv("LATGAME_DATA_DIR", os.path.join(BASE_DIR, "data"))
LOGS_DIR = os.getenv("LATGAME_LOGS_DIR", os.path.join(DATA_DIR, "logs"))
OUTPUT_DIR = os.getenv("LATGAME_OUTPUT_DIR", os.path.join(DATA_DIR, "runs"))

# Logging
LOG_LEVEL = os.getenv("LATGAME_LOG_LEVEL", "INFO").upper()

# Engine settings
DEFAULT_SCHEME = os.getenv("LATGAME_SCHEME", "active").lower()  # active, naive
DEFAULT_RECORD_EVERY = float(os.getenv("LATGAME_RECORD_EVERY", 1.0))
EVENT_BATCH_SIZE = int(os.getenv("LATGAME_EVENT_BATCH_SIZE", 4096))

# Orchestration settings
DEFAULT_WORKERS = int(os.getenv("LATGAME_WORKERS", 1))
SHOW_PROGRESS = os.getenv("LATGAME_SHOW_PROGRESS", "True").lower() in ("true", "1", "t")

# Name of the variable that overrides master_seed in experiment configs
SEED_ENV_VAR = "LATGAME_SEED"


def ensure_directories_exist() -> None:
    """Create directories if they don't exist."""
    os.makedirs(DATA_DIR, exist_ok=True)
    os.makedirs(LOGS_DIR, exist_ok=True)
    os.makedirs(OUTPUT_DIR, exist_ok=True)


def print_settings() -> None:
    """Print the current settings."""
    print("\n" + "=" * 50)
    print("latgame - Settings")
    print("=" * 50)

    print("\nGeneral Settings:")
    print(f"  DATA_DIR: {DATA_DIR}")
    print(f"  LOGS_DIR: {LOGS_DIR}")
    print(f"  OUTPUT_DIR: {OUTPUT_DIR}")
    print(f"  LOG_LEVEL: {LOG_LEVEL}")

    print("\nEngine Settings:")
    print(f"  DEFAULT_SCHEME: {DEFAULT_SCHEME}")
    print(f"  DEFAULT_RECORD_EVERY: {DEFAULT_RECORD_EVERY}")
    print(f"  EVENT_BATCH_SIZE: {EVENT_BATCH_SIZE}")

    print("\nOrchestration Settings:")
    print(f"  DEFAULT_WORKERS: {DEFAULT_WORKERS}")
    print(f"  SHOW_PROGRESS: {SHOW_PROGRESS}")
    print(f"  seed override variable: {SEED_ENV_VAR}={os.getenv(SEED_ENV_VAR, '')}")

    print("\n" + "=" * 50 + "\n")
