"""Pure algorithms shared by the engine and the harness."""
