import math

import numpy as np
import pytest
from numpy.polynomial import hermite as H
from scipy.integrate import quad
from scipy.special import spherical_kn

from laplace_qm.errors import DomainError
from laplace_qm.specfun import (
    double_factorial,
    hermite,
    mod_sph_bessel_k,
    mod_sph_bessel_k_sdomain,
)


@pytest.mark.parametrize("n, coef", [(0, [1]), (1, [0, 2]), (2, [-2, 0, 4])])
def test_hermite_low_orders(n, coef):
    assert list(hermite(n).coef) == coef


@pytest.mark.parametrize("n", range(13))
def test_hermite_matches_numpy(n):
    assert hermite(n).coef == pytest.approx(H.herm2poly([0] * n + [1]))


def test_hermite_orthogonality():
    for m in range(9):
        for n in range(m):
            hm, hn = hermite(m), hermite(n)
            val = quad(lambda x: hm(x) * hn(x) * math.exp(-x * x), -12, 12, points=[0.0], limit=400)[0]
            norms = math.sqrt(math.pi) * math.sqrt(
                2.0**m * math.factorial(m) * 2.0**n * math.factorial(n))
            assert abs(val) <= 1e-8 * norms


@pytest.mark.parametrize("p, expected", [(0, 1), (1, 1), (5, 15), (7, 105), (8, 384)])
def test_double_factorial(p, expected):
    assert double_factorial(p) == expected


def test_k0_and_k1():
    assert mod_sph_bessel_k(0, 1.0) == pytest.approx(math.exp(-1))
    assert mod_sph_bessel_k(1, 1.0) == pytest.approx(2 * math.exp(-1))
    assert mod_sph_bessel_k(1, 1.0) == pytest.approx(0.73576, abs=5e-6)


@pytest.mark.parametrize("l", range(7))
@pytest.mark.parametrize("s", [0.3, 1.0, 2.5, 9.0])
def test_k_matches_scipy_up_to_convention(l, s):
    # scipy's k_l carries an extra pi/2
    assert mod_sph_bessel_k(l, s) == pytest.approx(2 / math.pi * spherical_kn(l, s), rel=1e-12)


@pytest.mark.parametrize("s", [50.0, 200.0, 600.0])
def test_k_large_argument(s):
    # leading term dominates with relative correction 3/s + 3/s^2
    rel = mod_sph_bessel_k(2, s) / (math.exp(-s) / s) - 1
    assert rel == pytest.approx(3 / s + 3 / s**2, rel=1e-10)
    assert rel < 4 / s


@pytest.mark.parametrize("l", range(1, 6))
@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 5.0])
def test_k_recursion(l, s):
    lhs = mod_sph_bessel_k(l - 1, s) - mod_sph_bessel_k(l + 1, s)
    rhs = -(2 * l + 1) / s * mod_sph_bessel_k(l, s)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_k_sdomain_form():
    for l in range(5):
        f = mod_sph_bessel_k_sdomain(l, extra_power=l)
        for s in (0.4, 1.0, 3.0):
            assert f(s) == pytest.approx(s**l * mod_sph_bessel_k(l, s), rel=1e-13)


def test_k_domain():
    with pytest.raises(DomainError):
        mod_sph_bessel_k(1, 0.0)
    with pytest.raises(DomainError):
        mod_sph_bessel_k(1.5, 1.0)
    assert np.isfinite(mod_sph_bessel_k(3, 1e-3))
