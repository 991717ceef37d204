"""Event schedulers for the best-response engine."""
