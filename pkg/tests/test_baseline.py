"""Fixed hybrid-array comparison system."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from pass_trihybrid import SystemParams, UserPosition, baseline_capacity, fixed_array

PARAMS = SystemParams()


class TestGeometry:
    def test_half_wavelength_line_at_center(self):
        arr = fixed_array(PARAMS)
        assert arr.positions.shape == (4, 3)
        assert_allclose(np.diff(arr.positions[:, 1]), PARAMS.wavelength_m / 2, rtol=1e-15)
        assert_allclose(arr.positions.mean(axis=0), [0.0, 0.0, 3.0], atol=1e-15)
        assert arr.spacing_m == PARAMS.wavelength_m / 2

    def test_element_count_override(self):
        assert fixed_array(PARAMS, n_elements=7).positions.shape == (7, 3)
        with pytest.raises(ValueError):
            fixed_array(PARAMS, n_elements=0)


class TestCapacity:
    def test_centered_user_modes_agree(self):
        user = UserPosition(0.0, 0.0)
        single = baseline_capacity(PARAMS, user, "single")
        multi = baseline_capacity(PARAMS, user, "multi")
        assert abs(single.capacity_bits - multi.capacity_bits) / multi.capacity_bits < 1e-3
        assert single.snr <= multi.snr

    def test_single_element_modes_identical(self):
        user = UserPosition(3.0, 1.0)
        single = baseline_capacity(PARAMS, user, "single", n_elements=1)
        multi = baseline_capacity(PARAMS, user, "multi", n_elements=1)
        assert single.snr == pytest.approx(multi.snr, rel=1e-15)

    def test_corner_user_below_center(self):
        center = baseline_capacity(PARAMS, UserPosition(0.0, 0.0), "single")
        corner = baseline_capacity(PARAMS, UserPosition(25.0, 10.0), "single")
        assert corner.capacity_bits < center.capacity_bits

    def test_single_never_exceeds_multi(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            user = UserPosition(rng.uniform(-25, 25), rng.uniform(-10, 10))
            s = baseline_capacity(PARAMS, user, "single")
            m = baseline_capacity(PARAMS, user, "multi")
            assert s.snr <= m.snr * (1 + 1e-12)

    def test_average_capacity_non_increasing_in_region_width(self):
        rng = np.random.default_rng(31)
        units = rng.random((500, 2))
        averages = []
        for dx in (10.0, 50.0, 100.0):
            p = PARAMS.replace(dx_m=dx)
            caps = [
                baseline_capacity(
                    p, UserPosition((ux - 0.5) * dx, (uy - 0.5) * p.dy_m), "multi"
                ).capacity_bits
                for ux, uy in units
            ]
            averages.append(np.mean(caps))
        assert averages[0] >= averages[1] >= averages[2]

    def test_invalid_mode(self):
        with pytest.raises(ValueError):
            baseline_capacity(PARAMS, UserPosition(0, 0), "dual")

    def test_multi_requires_two_chains(self):
        p = PARAMS.replace(num_rf_chains=1)
        with pytest.raises(ValueError):
            baseline_capacity(p, UserPosition(0, 0), "multi")
