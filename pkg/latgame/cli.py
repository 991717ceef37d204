"""Command line interface for latgame."""
import argparse
import logging
import os
import re
import sys
from typing import List, Optional

from latgame.config import settings
from latgame.exceptions import ConfigParseError, LatgameError
from latgame.models.experiment import ExperimentMode


EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2

_MODE_LINE = re.compile(r"^\s*mode\s*=", re.MULTILINE)


def setup_logging():
    """Set up logging configuration."""
    # Create logs directory if it doesn't exist
    os.makedirs(settings.LOGS_DIR, exist_ok=True)

    # Configure logging
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(),
            logging.FileHandler(os.path.join(settings.LOGS_DIR, "latgame.log")),
        ],
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser."""
    parser = argparse.ArgumentParser(
        prog="latgame",
        description="Best-response dynamics on periodic lattices",
    )

    # Add subparsers for different commands
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    # One command per experiment mode
    for mode in ExperimentMode:
        mode_parser = subparsers.add_parser(mode.value, help=f"Run a {mode.value} experiment")
        mode_parser.add_argument(
            "--config", type=str, required=True, help="Path to a `key = value` config file"
        )
        mode_parser.add_argument(
            "--out", type=str, default=None, help="Output directory (overrides output_dir)"
        )
        mode_parser.add_argument(
            "--workers", type=int, default=None, help="Replica worker processes"
        )

    # Manifest re-verification
    check_parser = subparsers.add_parser("check-manifest", help="Recompute artifact checksums of a run")
    check_parser.add_argument("output_dir", type=str, help="Directory containing manifest.txt")

    # Settings command
    subparsers.add_parser("settings", help="Print settings")

    return parser


def _read_config(path: str, command: str):
    from latgame.services.config_parser import parse_config, read_config_text

    text = read_config_text(path)
    if not _MODE_LINE.search(text):
        text = text.rstrip("\n") + f"\nmode = {command}\n"
    config = parse_config(text)
    if config.mode.value != command:
        raise ConfigParseError(f"config mode {config.mode.value!r} does not match command {command!r}")
    return config


def run_command(args: argparse.Namespace) -> int:
    """Execute a parsed command and return the exit code."""
    if args.command == "settings":
        settings.print_settings()
        return EXIT_OK

    if args.command == "check-manifest":
        from latgame.services.artifact_writer import verify_manifest

        mismatched = verify_manifest(args.output_dir)
        if mismatched:
            for name in mismatched:
                print(f"checksum mismatch: {name}")
            return EXIT_VERIFY_FAILED
        print("All artifact checksums match")
        return EXIT_OK

    from latgame.services.experiment_service import ExperimentRunner

    config = _read_config(args.config, args.command)
    settings.ensure_directories_exist()
    runner = ExperimentRunner(workers=args.workers)
    manifest = runner.run_experiment(config, output_dir=args.out)

    print(f"Artifacts written to {manifest.output_dir} ({len(manifest.artifacts)} files)")
    for key, value in manifest.results.items():
        print(f"  {key}: {value}")
    if manifest.passed is False:
        print("Verification FAILED")
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_INVALID

    # Set up logging
    setup_logging()

    # Print startup message
    print("\n" + "=" * 50)
    print("latgame")
    print("=" * 50 + "\n")

    try:
        return run_command(args)
    except ConfigParseError as e:
        print(f"Config error: {e}")
        return EXIT_INVALID
    except LatgameError as e:
        print(f"Error: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
