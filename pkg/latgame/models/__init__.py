"""Models package for latgame."""
