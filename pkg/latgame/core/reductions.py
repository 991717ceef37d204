"""Deterministic operators: sparse reduction, the growth map Φ and the hypercubic view.

Hypercubes H_z = 2z + {0,1}^d are anchored at even coordinates. The least fixed
point of Φ above a union of hypercubes equals the absorbing state of every sparse
run with a1 > a2 > 0: each flip adds a site of Φ(current) ⊆ Φ(closure) = closure,
and an absorbing state is a fixed point of Φ containing the start, hence contains
the closure.
"""
import itertools
import logging
from typing import List, Tuple

import numpy as np

from latgame.core.lattice_rules import strategy1_counts
from latgame.exceptions import ContractViolationError, InvalidInputError
from latgame.models.field import CoarseField, CoarseGeometry, StrategyField
from latgame.models.lattice import GameParams, LatticeGeometry
from latgame.models.reduction import CornerCertificate, CornerLayer


logger = logging.getLogger(__name__)


def _blocked_shape(sides: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(v for s in sides for v in (s // 2, 2))


def coarse_indicator(indicator: np.ndarray) -> np.ndarray:
    """Coarse array marking hypercubes that are entirely marked."""
    blocked = indicator.reshape(_blocked_shape(indicator.shape))
    return blocked.all(axis=tuple(range(1, 2 * indicator.ndim, 2)))


def expand_indicator(coarse: np.ndarray) -> np.ndarray:
    """Fine array marking every site of each marked hypercube."""
    d = coarse.ndim
    expanded = coarse
    for axis in range(d):
        expanded = np.repeat(expanded, 2, axis=axis)
    return expanded


def sparse_reduce(field: StrategyField) -> StrategyField:
    """Union of all hypercubes H_z fully contained in the strategy-1 set."""
    coarse = coarse_indicator(field.to_array())
    return StrategyField.from_indicator(field.geometry, expand_indicator(coarse))


def hypercubic_view(field: StrategyField) -> CoarseField:
    """Coarse field occupied at z iff H_z is entirely strategy 1."""
    geometry = CoarseGeometry.of(field.geometry)
    return CoarseField.from_indicator(geometry, coarse_indicator(field.to_array()))


def hypercube_union(geometry: LatticeGeometry, coarse: CoarseField) -> StrategyField:
    """Fine field equal to the union of H_z over occupied coarse sites z."""
    if coarse.geometry != CoarseGeometry.of(geometry):
        raise InvalidInputError("coarse field does not tile the given lattice")
    return StrategyField.from_indicator(geometry, expand_indicator(coarse.to_array()))


def phi_indicator(indicator: np.ndarray, params: GameParams) -> np.ndarray:
    """Φ evaluated synchronously from a frozen input array."""
    degree = 2 * indicator.ndim
    n1 = strategy1_counts(indicator)
    lhs = params.a1 * n1.astype(np.float64)
    rhs = params.a2 * (degree - n1).astype(np.float64)
    return (lhs > rhs) | (indicator & (lhs == rhs))


def phi(field: StrategyField, params: GameParams) -> StrategyField:
    """Sites that would become or stay strategy 1 at their next update."""
    return StrategyField.from_indicator(field.geometry, phi_indicator(field.to_array(), params))


def phi_iterate(field: StrategyField, params: GameParams, n: int) -> StrategyField:
    """n-fold composition of Φ; n = 0 is the identity."""
    if n < 0:
        raise InvalidInputError(f"iteration count {n} is negative")
    current = field.to_array()
    for _ in range(n):
        current = phi_indicator(current, params)
    return StrategyField.from_indicator(field.geometry, current)


def phi_closure_depth(field: StrategyField, params: GameParams) -> Tuple[StrategyField, int]:
    """Least fixed point of Φ above a union of hypercubes, with the number of steps taken.

    Raises:
        ContractViolationError: if an iterate shrinks or the iteration does not
            settle within the site count, which means the input does not
            satisfy a1 > a2 > 0 with a hypercube-union start.
    """
    current = field.to_array()
    limit = field.geometry.n_sites
    for depth in range(limit + 1):
        nxt = phi_indicator(current, params)
        if np.any(current & ~nxt):
            raise ContractViolationError(
                f"Φ iterate shrank at step {depth + 1}; closure requires a1 > a2 > 0 "
                "and a hypercube-union start"
            )
        if np.array_equal(nxt, current):
            logger.debug("Φ closure reached after %d steps", depth)
            return StrategyField.from_indicator(field.geometry, current), depth
        current = nxt
    raise ContractViolationError(f"Φ closure did not settle within {limit} steps")


def phi_closure(field: StrategyField, params: GameParams) -> StrategyField:
    """Least fixed point of Φ above the input (see phi_closure_depth)."""
    return phi_closure_depth(field, params)[0]


def corner_fill_certificate(d: int, params: GameParams, side: int = 8) -> CornerCertificate:
    """Stage-by-stage check that d hypercubes H_{z-e_j} fill H_z under Φ.

    Layer n must contain 2z + {x in {0,1}^d : sum(x) < n} for n = 1..d+1.
    """
    if d not in (1, 2, 3):
        raise InvalidInputError(f"corner certificate supports d in {{1, 2, 3}}, got {d}")
    if not params.monotone:
        raise InvalidInputError("corner certificate requires a1 > a2 > 0")
    if side < 8:
        raise InvalidInputError(f"corner certificate needs side >= 8, got {side}")
    geometry = LatticeGeometry.cubic(d, side)
    z = (1,) * d
    start = np.zeros(geometry.sides, dtype=bool)
    for j in range(d):
        corner = tuple(2 * (zi - (1 if i == j else 0)) for i, zi in enumerate(z))
        start[tuple(slice(c, c + 2) for c in corner)] = True

    offsets = list(itertools.product((0, 1), repeat=d))
    cube = [tuple(2 * zi + o for zi, o in zip(z, offset)) for offset in offsets]
    certificate = CornerCertificate(d=d, a1=params.a1, a2=params.a2, side=side)
    current = start
    for n in range(1, d + 2):
        current = phi_indicator(current, params)
        required = sorted(layer_sites(d, z, n))
        present = sorted(x for x in cube if current[x])
        included = set(required) <= set(present)
        certificate.layers.append(
            CornerLayer(
                n=n,
                required=required,
                present=present,
                included=included,
                exact=present == required,
            )
        )
    return certificate


def random_hypercube_union(
    geometry: LatticeGeometry, density: float, rng: np.random.Generator
) -> StrategyField:
    """Union of independently chosen hypercubes, each present with the given probability."""
    coarse_sides = CoarseGeometry.of(geometry).sides
    coarse = rng.random(coarse_sides) < density
    return StrategyField.from_indicator(geometry, expand_indicator(coarse))


def layer_sites(d: int, z: Tuple[int, ...], n: int) -> List[Tuple[int, ...]]:
    """Sites 2z + x of H_z with sum(x) < n."""
    return [
        tuple(2 * zi + o for zi, o in zip(z, offset))
        for offset in itertools.product((0, 1), repeat=d)
        if sum(offset) < n
    ]
