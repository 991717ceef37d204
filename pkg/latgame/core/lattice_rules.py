"""Lattice geometry helpers, payoffs and the deterministic best-response update rule."""
import math
from functools import lru_cache
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from latgame.core.seeding import FIELD_STREAM, make_rng
from latgame.exceptions import InvalidInputError
from latgame.models.field import StrategyField
from latgame.models.lattice import (
    GameParams,
    LatticeGeometry,
    PayoffMatrix,
    SiteId,
    StrategyClass,
)


class PayoffLandscape(BaseModel):
    """Hypothetical payoffs of a site under either strategy.

    phi1 and phi2 are only available when the full payoff matrix is known;
    the difference phi1 - phi2 = a1*N1 - a2*N2 is always available.
    """

    model_config = ConfigDict(frozen=True)

    difference: float
    phi1: Optional[float] = None
    phi2: Optional[float] = None


def derive_params(matrix: PayoffMatrix) -> GameParams:
    """Reduce a payoff matrix to (a1, a2) = (a11 - a21, a22 - a12)."""
    entries = (matrix.a11, matrix.a12, matrix.a21, matrix.a22)
    if not all(math.isfinite(v) for v in entries):
        raise InvalidInputError(f"payoff matrix has non-finite entries: {entries}")
    return GameParams(a1=matrix.a11 - matrix.a21, a2=matrix.a22 - matrix.a12)


@lru_cache(maxsize=16)
def neighbor_table(geometry: LatticeGeometry) -> np.ndarray:
    """Row-major neighbor indices, shape (n_sites, 2d).

    Column 2j holds x - e_j and column 2j + 1 holds x + e_j.
    """
    index = np.arange(geometry.n_sites).reshape(geometry.sides)
    columns = []
    for axis in range(geometry.d):
        columns.append(np.roll(index, 1, axis=axis).reshape(-1))
        columns.append(np.roll(index, -1, axis=axis).reshape(-1))
    table = np.stack(columns, axis=1)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=16)
def neighbor_lists(geometry: LatticeGeometry) -> Tuple[Tuple[int, ...], ...]:
    """Neighbor table as nested tuples for scalar event loops."""
    return tuple(tuple(row) for row in neighbor_table(geometry).tolist())


def neighbors(geometry: LatticeGeometry, x: Union[int, SiteId]) -> List[SiteId]:
    """The 2d periodic neighbors x - e_j, x + e_j of a site."""
    row = neighbor_table(geometry)[geometry.index(x)]
    return [geometry.site(int(i)) for i in row]


def count_neighbors(field: StrategyField, x: Union[int, SiteId]) -> Tuple[int, int]:
    """Numbers (N1, N2) of strategy-1 and strategy-2 neighbors of x."""
    geometry = field.geometry
    row = neighbor_table(geometry)[geometry.index(x)]
    n1 = int(field.indicator()[row].sum())
    return n1, geometry.degree - n1


def strategy1_counts(indicator: np.ndarray) -> np.ndarray:
    """N1 at every site of a boolean array shaped like the torus."""
    counts = np.zeros(indicator.shape, dtype=np.int64)
    for axis in range(indicator.ndim):
        counts += np.roll(indicator, 1, axis=axis)
        counts += np.roll(indicator, -1, axis=axis)
    return counts


def payoff_landscape(
    field: StrategyField,
    params: Union[GameParams, PayoffMatrix],
    x: Union[int, SiteId],
) -> PayoffLandscape:
    """Payoffs phi1, phi2 the player at x would get under strategy 1 or 2."""
    n1, n2 = count_neighbors(field, x)
    if isinstance(params, PayoffMatrix):
        phi1 = params.a11 * n1 + params.a12 * n2
        phi2 = params.a21 * n1 + params.a22 * n2
        game = derive_params(params)
        return PayoffLandscape(difference=game.a1 * n1 - game.a2 * n2, phi1=phi1, phi2=phi2)
    return PayoffLandscape(difference=params.a1 * n1 - params.a2 * n2)


def preferred_strategy(params: GameParams, n1: int, n2: int) -> Optional[int]:
    """Strategy with the strictly larger payoff, None on an exact tie.

    The comparison is an exact binary comparison of a1*N1 against a2*N2.
    """
    lhs = params.a1 * n1
    rhs = params.a2 * n2
    if lhs > rhs:
        return 1
    if lhs < rhs:
        return 2
    return None


def flip_target(field: StrategyField, params: GameParams, x: Union[int, SiteId]) -> Optional[int]:
    """Strategy the site switches to at its next update, or None if it keeps its strategy."""
    n1, n2 = count_neighbors(field, x)
    preferred = preferred_strategy(params, n1, n2)
    if preferred is None or preferred == field.strategy_at(x):
        return None
    return preferred


def flip_targets(indicator: np.ndarray, params: GameParams) -> np.ndarray:
    """Vectorized flip targets: 0 for none, else the new strategy.

    ``indicator`` is the strategy-1 indicator shaped like the torus.
    """
    degree = 2 * indicator.ndim
    n1 = strategy1_counts(indicator)
    lhs = params.a1 * n1.astype(np.float64)
    rhs = params.a2 * (degree - n1).astype(np.float64)
    targets = np.zeros(indicator.shape, dtype=np.int8)
    targets[(lhs > rhs) & ~indicator] = 1
    targets[(lhs < rhs) & indicator] = 2
    return targets


def is_absorbing(field: StrategyField, params: GameParams) -> bool:
    """True when no site has a flip target."""
    return not flip_targets(field.to_array(), params).any()


def classify_strategy(a: float) -> StrategyClass:
    if a > 0:
        return StrategyClass.SELFISH
    if a < 0:
        return StrategyClass.ALTRUISTIC
    return StrategyClass.NEUTRAL


def classify(params: GameParams) -> Tuple[StrategyClass, StrategyClass]:
    """Selfish/altruistic/neutral classification of both strategies."""
    return classify_strategy(params.a1), classify_strategy(params.a2)


def random_field(geometry: LatticeGeometry, p: float, seed: int) -> StrategyField:
    """Product measure: each site holds strategy 1 independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"density p={p} is outside [0, 1]")
    rng = make_rng(seed, FIELD_STREAM)
    return StrategyField.from_indicator(geometry, rng.random(geometry.n_sites) < p)
