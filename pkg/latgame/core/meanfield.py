"""Mean-field approximation u1' = u2 1{a1 u1 > a2 u2} - u1 1{a1 u1 < a2 u2}.

The right-hand side is discontinuous at u* = a2 / (a1 + a2). Both indicators
are false at u* itself, so u* is stationary. In the coexistence regime both
sides point toward u*, trajectories reach it in finite time and stay there.
"""
import math
from typing import List, Optional, Sequence

import numpy as np

from latgame.exceptions import InvalidInputError, UnsupportedError
from latgame.models.lattice import GameParams
from latgame.models.meanfield import MeanFieldPoint, Regime, RegimeKind


GROW = 1
DECAY = -1
STILL = 0


def _check_frequency(u1: float) -> None:
    if not 0.0 <= u1 <= 1.0:
        raise InvalidInputError(f"frequency u1={u1} is outside [0, 1]")


def threshold(params: GameParams) -> Optional[float]:
    """u* = a2 / (a1 + a2), or None when a1 + a2 = 0."""
    total = params.a1 + params.a2
    if total == 0:
        return None
    return params.a2 / total


def branch(u1: float, params: GameParams) -> int:
    """Sign of the drift at u1: GROW (+u2), DECAY (-u1) or STILL.

    Compares u1 with u* when a1 + a2 != 0, which is the same test as
    a1 u1 versus a2 u2 but exact at u* itself.
    """
    u_star = threshold(params)
    if u_star is None:
        lhs, rhs = params.a1 * u1, params.a2 * (1.0 - u1)
        if lhs > rhs:
            return GROW
        return DECAY if lhs < rhs else STILL
    if u1 == u_star:
        return STILL
    above = u1 > u_star
    positive = params.a1 + params.a2 > 0
    return GROW if above == positive else DECAY


def classify_regime(params: GameParams) -> Regime:
    """One of the four sign regimes, with u* for coexistence and bistability."""
    if params.a1 == 0 or params.a2 == 0:
        raise UnsupportedError("mean-field regimes are not defined for neutral strategies (a_i = 0)")
    if params.a1 > 0 and params.a2 < 0:
        return Regime(kind=RegimeKind.STRATEGY1_WINS)
    if params.a1 < 0 and params.a2 > 0:
        return Regime(kind=RegimeKind.STRATEGY2_WINS)
    kind = RegimeKind.COEXISTENCE if params.a1 < 0 else RegimeKind.BISTABLE
    return Regime(kind=kind, threshold=threshold(params))


def drift(u1: float, params: GameParams) -> float:
    """Right-hand side of the mean-field equation; 0 at exact indicator ties."""
    _check_frequency(u1)
    mode = branch(u1, params)
    if mode == GROW:
        return 1.0 - u1
    if mode == DECAY:
        return -u1
    return 0.0


def _hitting_time(u0: float, mode: int, u_star: Optional[float]) -> Optional[float]:
    """Time at which the branch started at u0 reaches u*, if it heads there."""
    if u_star is None or not 0.0 < u_star < 1.0:
        return None
    if mode == GROW and u0 < u_star:
        return math.log((1.0 - u0) / (1.0 - u_star))
    if mode == DECAY and u0 > u_star:
        return math.log(u0 / u_star)
    return None


def exact_trajectory(u0: float, params: GameParams, t: float) -> float:
    """Closed-form u1(t): 1 - (1 - u0) e^-t on the growth branch, u0 e^-t on the decay branch."""
    _check_frequency(u0)
    if t < 0:
        raise InvalidInputError(f"time t={t} is negative")
    mode = branch(u0, params)
    if mode == STILL:
        return u0
    hit = _hitting_time(u0, mode, threshold(params))
    if hit is not None and t >= hit:
        return threshold(params)
    if mode == GROW:
        return 1.0 - (1.0 - u0) * math.exp(-t)
    return u0 * math.exp(-t)


def _rk4_step(u: float, h: float, mode: int) -> float:
    # Vector field of a single branch; smooth, so RK4 keeps its order.
    def f(v: float) -> float:
        return 1.0 - v if mode == GROW else -v

    k1 = f(u)
    k2 = f(u + 0.5 * h * k1)
    k3 = f(u + 0.5 * h * k2)
    k4 = f(u + h * k3)
    return u + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _crossed(u: float, nxt: float, u_star: float) -> bool:
    return (u - u_star) * (nxt - u_star) <= 0.0


def integrate_numeric_series(
    u0: float, params: GameParams, times: Sequence[float], dt: float
) -> List[float]:
    """Fixed-step RK4 values of u1 at the given nondecreasing times.

    A step that crosses u* is shortened by bisection to land on u*; from there
    the trajectory stays put when both sides point back (sliding), otherwise
    integration continues on the new branch.
    """
    _check_frequency(u0)
    if dt <= 0:
        raise InvalidInputError(f"step dt={dt} must be positive")
    if any(b < a for a, b in zip(times, times[1:])) or (times and times[0] < 0):
        raise InvalidInputError("times must be nonnegative and nondecreasing")
    u_star = threshold(params)
    if u_star is not None and not 0.0 < u_star < 1.0:
        u_star = None

    values: List[float] = []
    u = u0
    elapsed = 0.0
    mode = branch(u, params)
    for target in times:
        while elapsed < target and mode != STILL:
            h = min(dt, target - elapsed)
            nxt = _rk4_step(u, h, mode)
            if u_star is not None and u != u_star and _crossed(u, nxt, u_star):
                lo, hi = 0.0, h
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    if mid in (lo, hi):
                        break
                    if _crossed(u, _rk4_step(u, mid, mode), u_star):
                        hi = mid
                    else:
                        lo = mid
                elapsed += hi
                u = u_star
                after = branch(u_star + math.copysign(1e-12, mode), params)
                mode = STILL if after != mode else mode
                continue
            u = nxt
            elapsed += h
        values.append(u)
    return values


def integrate_numeric(u0: float, params: GameParams, t: float, dt: float) -> float:
    """Fixed-step RK4 approximation of u1(t)."""
    if t < 0:
        raise InvalidInputError(f"time t={t} is negative")
    return integrate_numeric_series(u0, params, [t], dt)[0]


def long_time_limit(u0: float, params: GameParams) -> float:
    """Regime-determined limit of u1(t) as t goes to infinity."""
    _check_frequency(u0)
    regime = classify_regime(params)
    if regime.kind == RegimeKind.STRATEGY1_WINS:
        return 1.0
    if regime.kind == RegimeKind.STRATEGY2_WINS:
        return 0.0
    if regime.kind == RegimeKind.COEXISTENCE:
        return regime.threshold
    mode = branch(u0, params)
    if mode == GROW:
        return 1.0
    if mode == DECAY:
        return 0.0
    return regime.threshold


def meanfield_series(
    u0: float, params: GameParams, t_max: float, dt: float, record_every: float
) -> List[MeanFieldPoint]:
    """Exact and numerical trajectories tabulated every record_every time units."""
    if record_every <= 0:
        raise InvalidInputError("record_every must be positive")
    times = [float(t) for t in np.arange(0.0, t_max + 0.5 * record_every, record_every) if t <= t_max]
    numeric = integrate_numeric_series(u0, params, times, dt)
    return [
        MeanFieldPoint(
            t=t,
            exact=exact_trajectory(u0, params, t),
            numeric=value,
            drift=drift(min(max(value, 0.0), 1.0), params),
        )
        for t, value in zip(times, numeric)
    ]
