import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from laplace_qm.errors import BudgetExceeded
from laplace_qm.pathology import (
    envelope_decay,
    profile,
    tw_deviation_moment,
    tw_deviation_moment_from_series,
    vtw_gamma_log_abs,
    vtw_gamma_rescaled,
)
from laplace_qm.sdomain import SDomainFn
from laplace_qm.transforms import bromwich_invert

PLATEAU = 191 / 300


def first_oscillations(gamma, k=5):
    return 2 * math.pi * k / gamma**2


@pytest.fixture(scope="module")
def profiles():
    return {g: profile(g, first_oscillations(g)) for g in (50.0, 100.0, 200.0)}


def test_zero_at_origin():
    for gamma in (10.0, 100.0, 1000.0):
        assert vtw_gamma_rescaled(0.0, gamma) == 0.0


def test_first_peak():
    gamma = 100.0
    assert vtw_gamma_rescaled(math.pi / (2 * gamma), gamma) == pytest.approx(0.637, abs=2e-3)


@pytest.mark.parametrize("gamma", [10.0, 20.0])
def test_against_arbitrary_precision_oracle(gamma):
    for xi in (0.05, 0.3, 1.0, 2.5):
        with mpmath.workdps(30):
            raw = mpmath.quad(lambda y: mpmath.exp(y * y / 4) * mpmath.sin(y * xi) / y,
                              mpmath.linspace(0, gamma, 41)) / mpmath.pi
            oracle = float(gamma**2 * mpmath.exp(-gamma**2 / 4) * raw)
        # Simpson at h = 1/(5 gamma) resolves the boundary layer to about 1e-6
        assert vtw_gamma_rescaled(xi, gamma) == pytest.approx(oracle, abs=1e-5)


def test_array_input_matches_scalar():
    xi = np.linspace(0, 0.5, 11)
    arr = vtw_gamma_rescaled(xi, 60.0)
    assert arr.shape == xi.shape
    for x, v in zip(xi, arr):
        assert vtw_gamma_rescaled(x, 60.0) == pytest.approx(v, rel=1e-12, abs=1e-15)


def test_no_overflow_at_large_gamma():
    v = vtw_gamma_rescaled(math.pi / 2000, 1000.0)
    assert math.isfinite(v) and abs(v - PLATEAU) < 0.01


def test_zero_spacing_at_gamma_100(profiles):
    p = profiles[100.0]
    spacing = np.diff(p.gamma * p.zeros / (2 * math.pi))
    assert spacing == pytest.approx(0.5, abs=5e-3)


def test_profile_examples(profiles):
    assert 0.62 <= profiles[50.0].plateau_estimate <= 0.66
    assert 0.99 <= profiles[200.0].wavelength_estimate * 200.0 / (2 * math.pi) <= 1.01
    a, b = profiles[100.0].plateau_estimate, profiles[200.0].plateau_estimate
    assert abs(a - b) / b <= 0.02


def test_profile_grid_resolution(profiles):
    for gamma, p in profiles.items():
        step = np.diff(p.xi_grid)
        assert np.all(step <= 2 * math.pi / gamma / 16 * (1 + 1e-12))
        assert len(p.extrema) == 10


@pytest.mark.parametrize("gamma", [50.0, 100.0, 200.0])
def test_profile_invariants(profiles, gamma):
    p = profiles[gamma]
    assert np.max(np.abs(p.rescaled_values)) <= 1.0
    assert p.zero_spacing_ratio == pytest.approx(1.0, abs=0.01)
    assert p.plateau_estimate == pytest.approx(PLATEAU, rel=0.02)


def test_profile_validation():
    with pytest.raises(ValueError):
        profile(5.0, 0.1)
    with pytest.raises(ValueError):
        profile(50.0, 0.1, samples_per_wavelength=4)


def test_budget():
    with pytest.raises(BudgetExceeded):
        profile(100.0, 2.0, budget=1000)
    with pytest.raises(BudgetExceeded):
        vtw_gamma_rescaled(1e4, 500.0, budget=1000)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("BROMWICH_POINT_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        profile(50.0, 0.5)


def test_concurrent_evaluation_matches_serial():
    xi = np.linspace(0, 2.0, 3001)
    serial = vtw_gamma_rescaled(xi, 100.0)
    threaded = vtw_gamma_rescaled(xi, 100.0, workers=4)
    assert np.array_equal(serial, threaded)
    p1 = profile(50.0, 0.05)
    p4 = profile(50.0, 0.05, workers=4)
    assert np.array_equal(p1.rescaled_values, p4.rescaled_values)


def test_envelope_examples():
    e = envelope_decay(100.0, [0.01, 0.5])
    assert e[0] > e[1]
    e50 = envelope_decay(50.0, [0.1, 0.5, 1.0])
    e100 = envelope_decay(100.0, [0.1, 0.5, 1.0])
    for a, b in zip(e50, e100):
        assert abs(a - b) / b <= 0.10


def test_envelope_tends_to_plateau(profiles):
    e = envelope_decay(100.0, [0.002])[0]
    assert e == pytest.approx(profiles[100.0].plateau_estimate, rel=0.01)


def test_envelope_rejects_bad_grid():
    with pytest.raises(ValueError):
        envelope_decay(50.0, [0.0])
    with pytest.raises(ValueError):
        envelope_decay(50.0, [2.5])


def test_amplitude_scale_in_log_space(profiles):
    # independent path: general Bromwich inversion close to the imaginary axis
    gamma = 50.0
    F = SDomainFn.exponential((0, 0, -0.25)) * SDomainFn.power(-1)
    peak = profiles[gamma].extrema[0][0]
    log_raw = bromwich_invert(F, peak, 1e-5, gamma).log_abs
    plateau = profiles[gamma].plateau_estimate
    assert log_raw - gamma**2 / 4 + 2 * math.log(gamma) == pytest.approx(math.log(plateau), abs=0.05)
    assert vtw_gamma_log_abs(peak, gamma) == pytest.approx(log_raw, abs=0.05)


@pytest.mark.parametrize("p, expected", [
    (1, Fraction(1, 4)), (2, Fraction(0)), (3, Fraction(-3, 16)), (5, Fraction(5, 16)),
])
def test_deviation_moment_examples(p, expected):
    assert tw_deviation_moment(p) == expected
    assert tw_deviation_moment_from_series(p, p) == expected


def test_deviation_moments_agree_exactly():
    for p in range(16):
        assert tw_deviation_moment(p) == tw_deviation_moment_from_series(p, 15)


def test_deviation_moment_validation():
    with pytest.raises(ValueError):
        tw_deviation_moment(-1)
    with pytest.raises(ValueError):
        tw_deviation_moment_from_series(4, 3)
