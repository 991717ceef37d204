"""Deterministic seed derivation."""
import numpy as np


# Spawn keys separating the independent random streams of one replica
FIELD_STREAM = 0
EVENT_STREAM = 1


def derive_seed(master_seed: int, *keys: int) -> int:
    """Derive a 64-bit seed from a master seed and a tuple of integer keys.

    Equal inputs give equal outputs on every platform, and distinct key
    tuples give statistically independent seeds.
    """
    sequence = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, stream: int = FIELD_STREAM) -> np.random.Generator:
    """Generator for one named stream of a seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(stream,)))
