"""Tests for geometry, payoffs and the deterministic update rule."""
import numpy as np
import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

from latgame.core.lattice_rules import (
    classify,
    count_neighbors,
    derive_params,
    flip_target,
    flip_targets,
    is_absorbing,
    neighbors,
    payoff_landscape,
    random_field,
)
from latgame.core.seeding import derive_seed
from latgame.exceptions import InvalidInputError
from latgame.models.field import StrategyField
from latgame.models.lattice import GameParams, LatticeGeometry, PayoffMatrix, StrategyClass

from tests.conftest import block_field


class TestGeometry:
    def test_row_major_index(self):
        geometry = LatticeGeometry(sides=(4, 6))
        assert geometry.index((0, 0)) == 0
        assert geometry.index((0, 5)) == 5
        assert geometry.index((1, 0)) == 6
        assert geometry.site(23) == (3, 5)

    def test_coordinates_wrap(self):
        geometry = LatticeGeometry.cubic(2, 4)
        assert geometry.canonical((-1, 5)) == (3, 1)

    @pytest.mark.parametrize("sides", [(5, 4), (2, 2), (4, 3)])
    def test_rejects_bad_sides(self, sides):
        with pytest.raises(ValidationError):
            LatticeGeometry(sides=sides)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            LatticeGeometry(d=3, sides=(4, 4))


class TestDeriveParams:
    def test_prisoners_dilemma_entries(self):
        params = derive_params(PayoffMatrix(a11=3, a12=0, a21=5, a22=1))
        assert params == GameParams(a1=-2, a2=1)

    @pytest.mark.parametrize(
        "entries, expected",
        [((1, 0, 0, 1), (1, 1)), ((0, 0, 0, 0), (0, 0)), ((3, 1, 2, 5), (1, 4))],
    )
    def test_differences(self, entries, expected):
        a11, a12, a21, a22 = entries
        params = derive_params(PayoffMatrix(a11=a11, a12=a12, a21=a21, a22=a22))
        assert (params.a1, params.a2) == expected

    def test_non_finite_entries_rejected(self):
        with pytest.raises(ValidationError):
            PayoffMatrix(a11=float("nan"), a12=0, a21=0, a22=1)


class TestNeighbors:
    def test_ring_wraps(self):
        geometry = LatticeGeometry.cubic(1, 6)
        assert set(neighbors(geometry, 0)) == {(5,), (1,)}

    def test_square_torus_corner(self):
        geometry = LatticeGeometry.cubic(2, 4)
        assert set(neighbors(geometry, (0, 0))) == {(3, 0), (1, 0), (0, 3), (0, 1)}

    def test_cubic_axis_neighbors(self):
        geometry = LatticeGeometry.cubic(3, 4)
        assert set(neighbors(geometry, (1, 1, 1))) == {
            (0, 1, 1), (2, 1, 1), (1, 0, 1), (1, 2, 1), (1, 1, 0), (1, 1, 2)
        }

    @pytest.mark.parametrize("strategy, expected", [(1, (4, 0)), (2, (0, 4))])
    def test_count_uniform_fields(self, strategy, expected):
        field = StrategyField.filled(LatticeGeometry.cubic(2, 4), strategy)
        assert count_neighbors(field, (2, 3)) == expected

    def test_neighbor_order(self):
        geometry = LatticeGeometry.cubic(2, 4)
        assert neighbors(geometry, (1, 1)) == [(0, 1), (2, 1), (1, 0), (1, 2)]

    def test_count_single_one(self):
        field = StrategyField.from_sites(LatticeGeometry.cubic(2, 4), [(0, 0)])
        assert count_neighbors(field, (1, 0)) == (1, 3)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_counts_partition_degree(self, seed):
        geometry = LatticeGeometry(sides=(4, 6))
        field = random_field(geometry, 0.5, seed)
        for i in range(geometry.n_sites):
            n1, n2 = count_neighbors(field, i)
            assert n1 + n2 == 4
            assert n1 >= 0 and n2 >= 0


class TestPayoffLandscape:
    @pytest.fixture
    def field(self):
        geometry = LatticeGeometry.cubic(2, 4)
        # (1, 1) has neighbors (0, 1), (2, 1), (1, 0) holding strategy 1
        return StrategyField.from_sites(geometry, [(0, 1), (2, 1), (1, 0)])

    def test_identity_matrix(self, field):
        landscape = payoff_landscape(field, PayoffMatrix(a11=1, a12=0, a21=0, a22=1), (1, 1))
        assert (landscape.phi1, landscape.phi2) == (3, 1)
        assert landscape.difference == 2

    def test_general_matrix(self):
        geometry = LatticeGeometry.cubic(2, 4)
        field = StrategyField.from_sites(geometry, [(0, 1), (2, 1)])
        landscape = payoff_landscape(field, PayoffMatrix(a11=3, a12=1, a21=2, a22=5), (1, 1))
        assert (landscape.phi1, landscape.phi2) == (8, 14)
        assert landscape.difference == landscape.phi1 - landscape.phi2

    def test_difference_only_from_params(self, field):
        landscape = payoff_landscape(field, GameParams(a1=2, a2=1), (1, 1))
        assert landscape.difference == 5
        assert landscape.phi1 is None


class TestFlipTarget:
    def test_ring_strategy2_between_ones(self):
        field = StrategyField.from_sites(LatticeGeometry.cubic(1, 6), [0, 2])
        assert flip_target(field, GameParams(a1=2, a2=1), 1) == 1

    def test_exact_tie_keeps_strategy(self):
        field = StrategyField.from_sites(LatticeGeometry.cubic(1, 6), [0, 1])
        assert flip_target(field, GameParams(a1=1, a2=1), 1) is None

    def test_two_against_two(self):
        geometry = LatticeGeometry.cubic(2, 4)
        field = StrategyField.from_sites(geometry, [(0, 1), (2, 1)])
        assert flip_target(field, GameParams(a1=1.01, a2=1), (1, 1)) == 1

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_vectorized_agrees_with_scalar(self, seed):
        geometry = LatticeGeometry(sides=(4, 6))
        params = GameParams(a1=1.5, a2=1.0)
        field = random_field(geometry, 0.4, seed)
        targets = flip_targets(field.to_array(), params).reshape(-1)
        for i in range(geometry.n_sites):
            assert (flip_target(field, params, i) or 0) == targets[i]


class TestAbsorbing:
    def test_single_block_is_absorbing(self, torus8, fig_params):
        assert is_absorbing(block_field(torus8, [(2, 2)]), fig_params)

    def test_isolated_one_is_not_absorbing(self, torus8, fig_params):
        field = StrategyField.from_sites(torus8, [(3, 3)])
        assert not is_absorbing(field, fig_params)

    @pytest.mark.parametrize("strategy", [1, 2])
    def test_uniform_fields_are_absorbing(self, torus8, fig_params, strategy):
        assert is_absorbing(StrategyField.filled(torus8, strategy), fig_params)


class TestClassify:
    @pytest.mark.parametrize(
        "a1, a2, expected",
        [
            (1, 1, (StrategyClass.SELFISH, StrategyClass.SELFISH)),
            (1, -1, (StrategyClass.SELFISH, StrategyClass.ALTRUISTIC)),
            (-0.5, -2, (StrategyClass.ALTRUISTIC, StrategyClass.ALTRUISTIC)),
            (0, 2, (StrategyClass.NEUTRAL, StrategyClass.SELFISH)),
        ],
    )
    def test_signs(self, a1, a2, expected):
        assert classify(GameParams(a1=a1, a2=a2)) == expected


class TestRandomField:
    def test_mean_density(self):
        geometry = LatticeGeometry.cubic(2, 64)
        densities = [random_field(geometry, 0.5, derive_seed(11, i)).density for i in range(100)]
        assert 0.48 <= np.mean(densities) <= 0.52

    def test_same_seed_same_field(self):
        geometry = LatticeGeometry.cubic(2, 16)
        assert random_field(geometry, 0.3, 42) == random_field(geometry, 0.3, 42)

    @pytest.mark.parametrize("p, strategy", [(0.0, 2), (1.0, 1)])
    def test_extreme_densities(self, p, strategy):
        geometry = LatticeGeometry.cubic(2, 8)
        assert random_field(geometry, p, 3) == StrategyField.filled(geometry, strategy)

    def test_density_out_of_range(self):
        with pytest.raises(InvalidInputError):
            random_field(LatticeGeometry.cubic(1, 8), 1.5, 0)
