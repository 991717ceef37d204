"""Services package for latgame: stateful engines and experiment orchestration."""
