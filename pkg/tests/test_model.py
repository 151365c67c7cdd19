from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tipp import (
    T_MAX,
    T_MIN,
    EntropyParams,
    PerLevelEnergies,
    PerSpotEnergies,
    level_availability_prob,
    level_energies,
    level_energy,
    level_fill_count,
    spot_occupancy_prob,
)

from oracles import q_reference

# High-precision evaluations of the closed form, frozen for regression.
Q_E1_T05 = 0.23840584404423512
Q_E025_T05 = 0.7550813375962909
Q_E001_T05 = 0.9900003333200006
AVAIL_Q099_S30 = 0.26029962661171957


def params(t):
    return EntropyParams(temperature=t)


class TestSpotOccupancyProb:
    def test_zero_energy_is_certainly_occupied(self):
        for t in (T_MIN, 0.1, 0.5, 1.0, T_MAX):
            assert spot_occupancy_prob(0.0, params(t)) == 1.0

    def test_known_values(self):
        assert spot_occupancy_prob(1.0, params(0.5)) == pytest.approx(Q_E1_T05, abs=1e-13)
        assert spot_occupancy_prob(0.25, params(0.5)) == pytest.approx(Q_E025_T05, abs=1e-13)
        assert spot_occupancy_prob(0.01, params(0.5)) == pytest.approx(Q_E001_T05, abs=1e-13)

    def test_hotter_lot_is_fuller(self):
        assert spot_occupancy_prob(1.0, params(T_MAX)) > spot_occupancy_prob(1.0, params(0.5))

    def test_matches_reference_expression(self):
        rng = np.random.default_rng(3)
        energies = rng.uniform(0, 3, 200)
        for t in (0.01, 0.3, 2.0, 9.5):
            got = spot_occupancy_prob(energies, params(t))
            np.testing.assert_allclose(got, q_reference(energies, t), rtol=1e-12)

    def test_array_input_returns_array(self):
        q = spot_occupancy_prob(np.array([0.0, 1.0]), params(0.5))
        assert isinstance(q, np.ndarray)
        assert q[0] == 1.0

    def test_scalar_input_returns_float(self):
        assert isinstance(spot_occupancy_prob(0.5, params(0.5)), float)

    @pytest.mark.parametrize("bad", [-1.0, float("nan"), float("inf")])
    def test_rejects_bad_energy(self, bad):
        with pytest.raises(ValueError):
            spot_occupancy_prob(bad, params(0.5))

    def test_rejects_bad_energy_in_array(self):
        with pytest.raises(ValueError):
            spot_occupancy_prob(np.array([0.5, -0.1]), params(0.5))

    @given(st.floats(min_value=0.0, max_value=50.0),
           st.floats(min_value=T_MIN, max_value=T_MAX))
    @settings(max_examples=300)
    def test_bounds(self, energy, temperature):
        q = spot_occupancy_prob(energy, params(temperature))
        assert 0.0 <= q <= 1.0
        # strictness below 1 needs the exponent to be representable
        if energy / temperature > 1e-12:
            assert q < 1.0

    @given(st.floats(min_value=0.0, max_value=4.0),
           st.floats(min_value=1e-4, max_value=2.0),
           st.floats(min_value=0.2, max_value=T_MAX))
    @settings(max_examples=300)
    def test_strictly_decreasing_in_energy(self, e1, gap, temperature):
        # domain keeps both exponents <= 30 so q stays a normal float
        lo = spot_occupancy_prob(e1 + gap, params(temperature))
        hi = spot_occupancy_prob(e1, params(temperature))
        assert hi > lo

    @given(st.floats(min_value=0.01, max_value=5.0),
           st.floats(min_value=T_MIN, max_value=T_MAX - 0.01),
           st.floats(min_value=0.01, max_value=2.0))
    @settings(max_examples=300)
    def test_strictly_increasing_in_temperature(self, energy, t1, gap):
        t2 = min(t1 + gap, T_MAX)
        assert spot_occupancy_prob(energy, params(t2)) > spot_occupancy_prob(energy, params(t1))


class TestEntropyParams:
    @pytest.mark.parametrize("t", [T_MIN / 2, T_MAX + 1, 0.0, -1.0, float("nan")])
    def test_rejects_out_of_domain_temperature(self, t):
        with pytest.raises(ValueError):
            EntropyParams(temperature=t)

    def test_rejects_nonpositive_constant(self):
        with pytest.raises(ValueError):
            EntropyParams(temperature=0.5, boltzmann_constant=0.0)

    def test_domain_bounds_are_allowed(self):
        EntropyParams(temperature=T_MIN)
        EntropyParams(temperature=T_MAX)


class TestLevelEnergy:
    def test_farthest_floor_has_unit_energy(self):
        assert level_energy(10, 10) == 1.0

    def test_direct_substitutions(self):
        assert level_energy(1, 10) == pytest.approx(0.01)
        assert level_energy(5, 10) == 0.25

    @pytest.mark.parametrize("i", [0, 11, -3])
    def test_out_of_range_index(self, i):
        with pytest.raises(ValueError):
            level_energy(i, 10)

    def test_level_energies_matches_scalar(self):
        arr = level_energies(7)
        assert arr.shape == (7,)
        for i in range(1, 8):
            assert arr[i - 1] == level_energy(i, 7)


class TestLevelFillCount:
    def test_model_value_rounds_to_seven(self):
        q = spot_occupancy_prob(1.0, params(0.5))
        assert level_fill_count(q, 30) == 7

    def test_extremes(self):
        assert level_fill_count(0.0, 30) == 0
        assert level_fill_count(1.0, 30) == 30

    def test_half_up_tie(self):
        # 0.25 * 6 = 1.5 exactly; half-up rounds to 2
        assert level_fill_count(0.25, 6) == 2
        assert level_fill_count(0.125, 4) == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            level_fill_count(1.1, 30)
        with pytest.raises(ValueError):
            level_fill_count(0.5, 0)

    @given(st.floats(min_value=0.0, max_value=1.0), st.integers(min_value=1, max_value=5000))
    @settings(max_examples=400)
    def test_nearest_count_bound_exact(self, q, capacity):
        count = level_fill_count(q, capacity)
        assert 0 <= count <= capacity
        # exact rational check of |count/S - q| <= 1/(2S)
        assert abs(Fraction(count, capacity) - Fraction(q)) <= Fraction(1, 2 * capacity)


class TestLevelAvailabilityProb:
    def test_certain_full_floor(self):
        assert level_availability_prob(1.0, 30) == 0.0

    def test_certain_empty_floor(self):
        assert level_availability_prob(0.0, 30) == 1.0

    def test_known_value(self):
        assert level_availability_prob(0.99, 30) == pytest.approx(AVAIL_Q099_S30, abs=1e-13)

    def test_array_input(self):
        p = level_availability_prob(np.array([0.0, 1.0, 0.99]), 30)
        assert p[0] == 1.0 and p[1] == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            level_availability_prob(-0.1, 30)
        with pytest.raises(ValueError):
            level_availability_prob(0.5, 0)

    @given(st.floats(min_value=0.001, max_value=0.999),
           st.floats(min_value=1e-3, max_value=0.5),
           st.integers(min_value=1, max_value=200))
    @settings(max_examples=300)
    def test_monotone_decreasing_in_q(self, q, gap, capacity):
        q2 = min(q + gap, 1.0)
        assert level_availability_prob(q, capacity) >= level_availability_prob(q2, capacity)

    @given(st.floats(min_value=0.01, max_value=0.99), st.integers(min_value=1, max_value=200))
    @settings(max_examples=300)
    def test_monotone_nondecreasing_in_capacity(self, q, capacity):
        assert level_availability_prob(q, capacity + 1) >= level_availability_prob(q, capacity)

    @given(st.floats(min_value=0.5, max_value=0.99), st.integers(min_value=1, max_value=40))
    @settings(max_examples=300)
    def test_strictly_increasing_in_capacity_when_representable(self, q, capacity):
        # q**(S+1) stays well above 1 ulp of 1.0 on this domain
        assert level_availability_prob(q, capacity + 1) > level_availability_prob(q, capacity)


class TestEnergySpec:
    def test_per_level_matches_level_energies(self):
        np.testing.assert_array_equal(PerLevelEnergies(10).energies(), level_energies(10))

    def test_per_level_validation(self):
        with pytest.raises(ValueError):
            PerLevelEnergies(0)

    def test_per_spot_energies_are_squared_distances(self):
        assignment = PerSpotEnergies((0.5, 1.0, 0.0))
        np.testing.assert_allclose(assignment.energies(), [0.25, 1.0, 0.0])

    def test_per_spot_requires_normalized_max(self):
        with pytest.raises(ValueError):
            PerSpotEnergies((0.5, 0.9))
        with pytest.raises(ValueError):
            PerSpotEnergies((0.5, 1.2))
        with pytest.raises(ValueError):
            PerSpotEnergies(())
