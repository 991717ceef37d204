"""Tests for the mean-field approximation."""
import math

import numpy as np
import pytest

from latgame.core.meanfield import (
    classify_regime,
    drift,
    exact_trajectory,
    integrate_numeric,
    integrate_numeric_series,
    long_time_limit,
    meanfield_series,
    threshold,
)
from latgame.exceptions import InvalidInputError, UnsupportedError
from latgame.models.lattice import GameParams
from latgame.models.meanfield import RegimeKind


REGIME_PARAMS = {
    RegimeKind.STRATEGY1_WINS: GameParams(a1=1.0, a2=-1.0),
    RegimeKind.STRATEGY2_WINS: GameParams(a1=-1.0, a2=1.0),
    RegimeKind.COEXISTENCE: GameParams(a1=-1.0, a2=-3.0),
    RegimeKind.BISTABLE: GameParams(a1=1.01, a2=1.0),
}


class TestClassifyRegime:
    def test_strategy1_wins(self):
        assert classify_regime(GameParams(a1=1, a2=-1)).kind == RegimeKind.STRATEGY1_WINS

    def test_coexistence_threshold(self):
        regime = classify_regime(GameParams(a1=-1, a2=-3))
        assert regime.kind == RegimeKind.COEXISTENCE
        assert regime.threshold == 0.75

    def test_bistable_threshold(self):
        regime = classify_regime(GameParams(a1=1.01, a2=1))
        assert regime.kind == RegimeKind.BISTABLE
        assert regime.threshold == pytest.approx(1 / 2.01)

    @pytest.mark.parametrize("kind, params", list(REGIME_PARAMS.items()))
    def test_each_regime(self, kind, params):
        regime = classify_regime(params)
        assert regime.kind == kind
        has_threshold = kind in (RegimeKind.COEXISTENCE, RegimeKind.BISTABLE)
        assert (regime.threshold is not None) == has_threshold
        if has_threshold:
            assert 0.0 < regime.threshold < 1.0

    @pytest.mark.parametrize("a1, a2", [(0, 1), (1, 0), (0, 0)])
    def test_neutral_unsupported(self, a1, a2):
        with pytest.raises(UnsupportedError):
            classify_regime(GameParams(a1=a1, a2=a2))

    def test_opposite_parameters_have_no_threshold(self):
        assert threshold(GameParams(a1=2, a2=-2)) is None
        assert classify_regime(GameParams(a1=2, a2=-2)).kind == RegimeKind.STRATEGY1_WINS


class TestDrift:
    def test_tie_is_stationary(self):
        assert drift(0.5, GameParams(a1=1, a2=1)) == 0.0

    def test_growth_branch(self):
        assert drift(0.6, GameParams(a1=1, a2=1)) == pytest.approx(0.4)

    def test_selfish_against_altruistic(self):
        assert drift(0.0, GameParams(a1=1, a2=-1)) == 1.0

    def test_decay_branch(self):
        assert drift(0.3, GameParams(a1=1, a2=1)) == pytest.approx(-0.3)

    def test_frequency_out_of_range(self):
        with pytest.raises(InvalidInputError):
            drift(1.2, GameParams(a1=1, a2=1))


class TestExactTrajectory:
    def test_half_life(self):
        assert exact_trajectory(0.0, GameParams(a1=1, a2=-1), math.log(2)) == pytest.approx(0.5)

    @pytest.mark.parametrize("t", [0.0, 1.0, 10.0])
    def test_stationary_tie(self, t):
        assert exact_trajectory(0.5, GameParams(a1=1, a2=1), t) == 0.5

    def test_growth_closed_form(self):
        value = exact_trajectory(0.6, GameParams(a1=1, a2=1), 1.0)
        assert value == pytest.approx(1 - 0.4 * math.exp(-1), abs=1e-12)
        assert value == pytest.approx(0.852848, abs=1e-6)

    def test_coexistence_slides_at_threshold(self):
        params = GameParams(a1=-1, a2=-1)
        hit = math.log(0.9 / 0.5)
        assert exact_trajectory(0.1, params, hit + 1.0) == 0.5
        assert exact_trajectory(0.1, params, 0.5 * hit) < 0.5

    def test_negative_time(self):
        with pytest.raises(InvalidInputError):
            exact_trajectory(0.2, GameParams(a1=1, a2=1), -1.0)

    @pytest.mark.parametrize("params", list(REGIME_PARAMS.values()))
    def test_stays_in_unit_interval(self, params):
        for u0 in np.linspace(0, 1, 11):
            for t in (0.0, 0.3, 2.0, 40.0):
                assert 0.0 <= exact_trajectory(float(u0), params, t) <= 1.0


class TestIntegrateNumeric:
    def test_matches_closed_form(self):
        params = GameParams(a1=1, a2=-1)
        assert integrate_numeric(0.0, params, 1.0, 1e-3) == pytest.approx(1 - math.exp(-1), abs=1e-8)

    def test_threshold_is_constant(self):
        params = GameParams(a1=1.01, a2=1)
        u_star = threshold(params)
        assert abs(integrate_numeric(u_star, params, 3.0, 1e-3) - u_star) < 1e-12

    def test_coexistence_approaches_threshold(self):
        assert integrate_numeric(0.1, GameParams(a1=-1, a2=-1), 20.0, 1e-3) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("kind, params", list(REGIME_PARAMS.items()))
    def test_grid_agreement(self, kind, params):
        u_star = threshold(params)
        times = [float(t) for t in np.linspace(0.0, 5.0, 20)]
        worst = 0.0
        for u0 in np.linspace(0.0, 1.0, 20):
            u0 = float(u0)
            if u_star is not None and abs(u0 - u_star) < 1e-9:
                continue
            numeric = integrate_numeric_series(u0, params, times, 1e-3)
            for t, value in zip(times, numeric):
                worst = max(worst, abs(value - exact_trajectory(u0, params, t)))
        assert worst < 1e-6, f"{kind.value}: max deviation {worst}"

    def test_rejects_bad_step(self):
        with pytest.raises(InvalidInputError):
            integrate_numeric(0.2, GameParams(a1=1, a2=1), 1.0, 0.0)

    def test_rejects_decreasing_times(self):
        with pytest.raises(InvalidInputError):
            integrate_numeric_series(0.2, GameParams(a1=1, a2=1), [1.0, 0.5], 1e-3)


class TestLongTimeLimit:
    def test_strategy1_wins(self):
        for u0 in (0.0, 0.3, 1.0):
            assert long_time_limit(u0, GameParams(a1=1, a2=-1)) == 1.0

    def test_symmetric_coexistence(self):
        for u0 in (0.0, 0.3, 1.0):
            assert long_time_limit(u0, GameParams(a1=-2, a2=-2)) == 0.5

    def test_bistable_sides(self):
        params = GameParams(a1=1.01, a2=1)
        assert long_time_limit(0.15, params) == 0.0
        assert long_time_limit(0.60, params) == 1.0
        assert long_time_limit(threshold(params), params) == threshold(params)

    def test_neutral_unsupported(self):
        with pytest.raises(UnsupportedError):
            long_time_limit(0.5, GameParams(a1=0, a2=1))

    @pytest.mark.parametrize("a1", [2.0, 1.0, -1.0, -0.5])
    @pytest.mark.parametrize("a2", [1.5, -1.0, -2.0])
    def test_agrees_with_large_time_trajectory(self, a1, a2):
        params = GameParams(a1=a1, a2=a2)
        for u0 in np.linspace(0.0, 1.0, 21):
            u0 = float(u0)
            assert exact_trajectory(u0, params, 60.0) == pytest.approx(long_time_limit(u0, params), abs=1e-12)


class TestSeries:
    def test_tabulates_both_trajectories(self):
        points = meanfield_series(0.2, GameParams(a1=1, a2=-1), 2.0, 1e-3, 0.5)
        assert [pt.t for pt in points] == [0.0, 0.5, 1.0, 1.5, 2.0]
        assert points[0].numeric == 0.2
        assert points[0].exact == pytest.approx(0.2)
        assert points[0].drift == pytest.approx(0.8)
        for pt in points:
            assert pt.numeric == pytest.approx(pt.exact, abs=1e-9)

    def test_rejects_bad_spacing(self):
        with pytest.raises(InvalidInputError):
            meanfield_series(0.2, GameParams(a1=1, a2=1), 1.0, 1e-3, 0.0)
