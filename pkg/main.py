"""Main entry point for latgame (python main.py <command> ...)."""
import sys

from latgame.cli import main


if __name__ == "__main__":
    sys.exit(main())
