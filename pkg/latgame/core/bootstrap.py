"""Bootstrap percolation with threshold m on a periodic coarse lattice."""
from typing import List, Tuple

import numpy as np

from latgame.exceptions import InvalidInputError
from latgame.models.bootstrap import BootstrapParams
from latgame.models.field import CoarseField


def check_threshold(m, d: int) -> int:
    value = m.m if isinstance(m, BootstrapParams) else int(m)
    if not 1 <= value <= 2 * d:
        raise InvalidInputError(f"threshold m={value} is outside [1, {2 * d}]")
    return value


def occupied_counts(occupied: np.ndarray) -> np.ndarray:
    counts = np.zeros(occupied.shape, dtype=np.int64)
    for axis in range(occupied.ndim):
        counts += np.roll(occupied, 1, axis=axis)
        counts += np.roll(occupied, -1, axis=axis)
    return counts


def step_indicator(occupied: np.ndarray, m: int) -> np.ndarray:
    """One synchronous step on a boolean array."""
    return occupied | (occupied_counts(occupied) >= m)


def limit_indicator(occupied: np.ndarray, m: int) -> Tuple[np.ndarray, int]:
    """First fixed point of the step map and the number of steps taken."""
    current = occupied
    for steps in range(current.size + 1):
        nxt = step_indicator(current, m)
        if np.array_equal(nxt, current):
            return current, steps
        current = nxt
    return current, current.size


def bootstrap_step(field: CoarseField, m) -> CoarseField:
    """Occupied sites stay occupied; an empty site with >= m occupied neighbors becomes occupied."""
    threshold = check_threshold(m, field.geometry.d)
    return CoarseField.from_indicator(field.geometry, step_indicator(field.to_array(), threshold))


def bootstrap_limit(field: CoarseField, m) -> CoarseField:
    """Infinite-time limit: iterate the step map to its first fixed point."""
    threshold = check_threshold(m, field.geometry.d)
    limit, _ = limit_indicator(field.to_array(), threshold)
    return CoarseField.from_indicator(field.geometry, limit)


def bootstrap_trace(field: CoarseField, m) -> List[int]:
    """Occupied counts at every step up to and including the fixed point."""
    threshold = check_threshold(m, field.geometry.d)
    current = field.to_array()
    counts = [int(current.sum())]
    for _ in range(current.size):
        nxt = step_indicator(current, threshold)
        if np.array_equal(nxt, current):
            break
        current = nxt
        counts.append(int(current.sum()))
    return counts


def is_fully_occupied(field: CoarseField) -> bool:
    return field.is_full
