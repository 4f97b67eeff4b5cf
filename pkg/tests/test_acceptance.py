"""End-to-end acceptance checks, one test per criterion."""
import math
from fractions import Fraction

import numpy as np

from laplace_qm import (
    Oscillator,
    PolyExp,
    SDomainFn,
    bromwich_invert,
    eigenstate,
    envelope_decay,
    forward_laplace,
    harmonic_recurrence,
    hermite,
    inverse_by_residues,
    laurent_expand,
    moments,
    profile,
    s_ode_residual,
    series_from_moments,
    tw_deviation_moment,
    tw_deviation_moment_from_series,
    tw_transform,
)

C, ELL = 3.0, 2.0
S = SDomainFn.power
P = SDomainFn.shifted_power
HO = Oscillator.harmonic()
MORSE = Oscillator.morse(C)
PT = Oscillator.poschl_teller(ELL)

# (oscillator, n, V(s), (v0, v0'))
REFERENCE = [
    (HO, 0, S(-1), (1.0, 0.0)),
    (HO, 1, S(-2), (0.0, 1.0)),
    (MORSE, 0, P(-0.5, -1), (1.0, -0.5)),
    (MORSE, 1, P(-0.5, -1, 2 * C - 2) - P(-0.5, -2), (2 * C - 2, -C)),
    (PT, 0, S(-1), (1.0, 0.0)),
    (PT, 1, S(-2), (0.0, 1.0)),
]
SAMPLES = np.linspace(0.6, 4.0, 20)
PLATEAU = 191 / 300


def _terms(f):
    return {t.key: t.coeff for t in f.terms}


def test_criterion_01_reference_states(criterion):
    with criterion(1, "reference transforms and boundary pairs", 1.0):
        for osc, n, V, pair in REFERENCE:
            st = eigenstate(osc, n)
            got, want = _terms(forward_laplace(st.v)), _terms(V)
            assert got.keys() == want.keys()
            for k in want:
                assert abs(got[k] - want[k]) <= 1e-12
            assert abs(st.v0 - pair[0]) <= 1e-12 and abs(st.v0prime - pair[1]) <= 1e-12


def test_criterion_02_residual_dichotomy(criterion):
    with criterion(2, "s-domain residual dichotomy", 1.0):
        for osc, n, V, (v0, v0p) in REFERENCE:
            tw = tw_transform(osc, n)
            for s in SAMPLES:
                assert abs(s_ode_residual(osc, n, V, v0, v0p, s)) <= 1e-10
                assert abs(s_ode_residual(osc, n, tw, v0, v0p, s)) >= 0.1
                assert abs(s_ode_residual(osc, n, tw, 0.0, 0.0, s)) <= 1e-8
        # the PT form is s^ell k_ell(s) built from the closed-form Bessel function
        s = 1.3
        k2 = math.exp(-s) / s * (1 + 3 / s + 3 / s**2)
        assert abs(tw_transform(PT, 0)(s) - s**2 * k2) <= 1e-12


def test_criterion_03_hermite_equivalence(criterion):
    with criterion(3, "terminated recurrence inverts to Hermite polynomials", 1.0):
        for n in range(11):
            seed = (1.0, 0.0) if n % 2 == 0 else (0.0, 1.0)
            series = harmonic_recurrence(n, *seed, n + 2)
            v = inverse_by_residues(series.to_sdomain())
            coeffs = np.zeros(n + 1)
            for c, p, b in v.smooth:
                assert b == 0.0
                coeffs[p] = c
            h = hermite(n).coef
            nz = h != 0
            ratios = coeffs[nz] / h[nz]
            assert np.all(coeffs[~nz] == 0)
            assert np.ptp(ratios) / abs(ratios[0]) <= 1e-9


def test_criterion_04_recurrence_divergence(criterion):
    with criterion(4, "non-integer n recurrence grows like 2k", 1.0):
        vk = harmonic_recurrence(0.5, 1.0, 0.0, 202).inverse_power_coefficients()
        assert abs(vk[202] / vk[200] - 400) / 400 <= 0.05


def test_criterion_05_morse_moments(criterion):
    with criterion(5, "Morse moment identity and series resummation", 1.0):
        for c in (2.1, 3.0, 5.0):
            f = PolyExp(((2 * c - 2, 0, 0.5), (-1.0, 1, 0.5)))
            m = moments(f, 10)
            for p in range(11):
                exact = 2 ** (p + 2) * math.factorial(p) * (c - 2 - p)
                assert abs(m[p] - exact) <= 1e-10 * max(1.0, abs(exact))
            ser = series_from_moments(moments(f, 8))
            closed = laurent_expand(P(-0.5, -1, 2 * c - 2) - P(-0.5, -2), 9)
            for p in range(9):
                assert abs(ser[p] - closed[p]) <= 1e-9 * max(1.0, abs(closed[p]))


def test_criterion_06_plateau_and_wavelength(criterion):
    with criterion(6, "plateau and wavelength of the rescaled inverse", 30.0):
        for gamma in (50.0, 100.0, 200.0):
            prof = profile(gamma, 10 * math.pi / gamma**2)
            print(f"  gamma={gamma:g} plateau={prof.plateau_estimate:.6f} "
                  f"spacing*gamma/pi={prof.zero_spacing_ratio:.6f}")
            assert abs(prof.plateau_estimate - PLATEAU) / PLATEAU <= 0.02
            assert abs(prof.zero_spacing_ratio - 1) <= 0.01


def test_criterion_07_envelope(criterion):
    with criterion(7, "envelope decay and collapse", 60.0):
        grid = np.linspace(0.05, 2.0, 40)
        e50 = np.array(envelope_decay(50.0, grid))
        for i in range(1, len(e50)):
            assert e50[i] <= 1.05 * e50[:i].min()
        assert e50[-1] < e50[0]
        e100 = np.array(envelope_decay(100.0, grid))
        assert np.all(np.abs(e50 - e100) / e100 <= 0.10)


def test_criterion_08_tw_moments(criterion):
    with criterion(8, "moments of the deviation from one", 1.0):
        values = [tw_deviation_moment(p) for p in range(16)]
        for p in range(16):
            assert values[p] == tw_deviation_moment_from_series(p, 15)
            assert isinstance(values[p], Fraction)
        assert all(values[p] == 0 for p in range(0, 16, 2))
        odd = [values[p] for p in range(1, 16, 2)]
        assert all(a * b < 0 for a, b in zip(odd, odd[1:]))


def test_criterion_09_bromwich(criterion):
    with criterion(9, "truncated Bromwich inversion at gamma = 400", 5.0):
        cases = [(S(-1), 0.05, lambda x: 1.0), (P(-0.5, -1), -0.45, lambda x: math.exp(-x / 2))]
        for F, a, exact in cases:
            for xi in (0.5, 1.0, 2.0):
                assert abs(bromwich_invert(F, xi, a, 400.0).value - exact(xi)) <= 1e-3


def test_criterion_10_delta(criterion):
    with criterion(10, "inverse of 1 is a delta, not zero", 1.0):
        f = inverse_by_residues(SDomainFn.constant(1.0))
        assert f.smooth == ()
        assert f.delta == ((1.0, 0),)
        assert f.is_distributional
