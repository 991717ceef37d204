"""Best-response dynamics on periodic lattices: simulation and verification engine."""

__version__ = "1.0.0"
