"""The truncated Bromwich inverse of ``exp(-s**2/4)/s`` and its moments.

With the contour pushed onto the imaginary axis the truncated inverse is

    v_gamma(xi) = (1/pi) int_0^gamma exp(y**2/4) sin(y xi) / y dy,

which grows like ``exp(gamma**2/4)/gamma**2``.  Everything here works with the
rescaled quantity ``g = gamma**2 exp(-gamma**2/4) v_gamma(xi)``, which is
O(1): it oscillates as ``sin(gamma xi)`` with an envelope close to ``2/pi``
for ``xi ~ 1/gamma`` and decays slowly on the scale ``xi ~ gamma``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import BudgetExceeded
from .sdomain import series_exp
from .specfun import double_factorial
from .transforms import point_budget, simpson_weights

#: Nodes with exp((y**2 - gamma**2)/4) below exp(-LOG_CUTOFF) are skipped.
LOG_CUTOFF = 80.0
_CHUNK_CELLS = 2_000_000

GAMMA_RANGE = (10.0, 1000.0)


def _nodes(xi_max: float, gamma: float, budget: int):
    y_lo = math.sqrt(max(0.0, gamma**2 - 4 * LOG_CUTOFF))
    h = 1.0 / (5 * gamma)
    if xi_max > 0:
        h = min(h, 2 * math.pi / (20 * xi_max))
    n = max(2, math.ceil((gamma - y_lo) / h))
    n += n % 2
    if n + 1 > budget:
        raise BudgetExceeded(f"{n + 1} quadrature nodes exceed the budget of {budget}")
    y = np.linspace(y_lo, gamma, n + 1)
    # (y^2 - gamma^2)/4 written to avoid cancellation near y = gamma
    w = simpson_weights(n, (gamma - y_lo) / n) * np.exp((y - gamma) * (y + gamma) / 4)
    return y, w * gamma**2 / math.pi


def _rescaled_chunk(xi: np.ndarray, gamma: float, budget: int) -> np.ndarray:
    y, w = _nodes(float(xi.max(initial=0.0)), gamma, budget)
    # sin(y xi)/y = xi * sinc(y xi / pi); finite at y = 0
    return (xi[:, None] * np.sinc(np.outer(xi, y) / math.pi)) @ w


def vtw_gamma_rescaled(xi, gamma: float, budget: int | None = None, workers: int = 1):
    """``gamma**2 exp(-gamma**2/4) v_gamma(xi)`` for scalar or array ``xi >= 0``.

    Composite Simpson with step ``min(2 pi/(20 xi), 1/(5 gamma))`` over the
    part of ``[0, gamma]`` where the Gaussian weight is above ``exp(-80)``;
    the rest contributes far below double precision.  Array input is split
    into chunks (optionally evaluated on ``workers`` threads); results keep
    the input order.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    arr = np.asarray(xi, dtype=float)
    if np.any(arr < 0):
        raise ValueError("xi must be nonnegative")
    cap = point_budget() if budget is None else budget
    flat = arr.ravel()
    y, _ = _nodes(float(flat.max(initial=0.0)), gamma, cap)
    size = max(1, _CHUNK_CELLS // len(y))
    chunks = [flat[i:i + size] for i in range(0, len(flat), size)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: _rescaled_chunk(c, gamma, cap), chunks))
    else:
        parts = [_rescaled_chunk(c, gamma, cap) for c in chunks]
    out = np.concatenate(parts) if parts else np.zeros(0)
    out = out.reshape(arr.shape)
    return out if out.ndim else float(out)


def vtw_gamma_log_abs(xi: float, gamma: float) -> float:
    """``log |v_gamma(xi)|``; the raw value overflows for gamma above ~60."""
    g = vtw_gamma_rescaled(xi, gamma)
    return math.log(abs(g)) + gamma**2 / 4 - 2 * math.log(gamma)


def _refine_peak(fun, lo: float, hi: float) -> tuple[float, float]:
    res = minimize_scalar(lambda x: -abs(fun(x)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * max(1.0, hi)})
    return float(res.x), float(fun(res.x))


@dataclass
class PathologyProfile:
    gamma: float
    xi_grid: np.ndarray
    rescaled_values: np.ndarray
    plateau_estimate: float
    wavelength_estimate: float
    extrema: list = field(default_factory=list)
    zeros: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def gamma_xi_over_2pi(self) -> np.ndarray:
        return self.gamma * self.xi_grid / (2 * math.pi)

    @property
    def xi_over_gamma(self) -> np.ndarray:
        return self.xi_grid / self.gamma

    @property
    def zero_spacing_ratio(self) -> float:
        """Mean zero spacing in units of ``pi/gamma`` (1 for ``sin(gamma xi)``)."""
        return self.wavelength_estimate / 2 * self.gamma / math.pi


def profile(gamma: float, xi_max_over_gamma: float, samples_per_wavelength: int = 16,
            budget: int | None = None, n_extrema: int = 10,
            workers: int = 1) -> PathologyProfile:
    """Sample ``g`` on ``[0, xi_max_over_gamma * gamma]``.

    The plateau estimate is the mean ``|g|`` over the first ``n_extrema``
    extrema (each refined by a bounded 1-D maximization), the wavelength
    estimate twice the mean spacing of the zeros (refined with Brent's method).
    """
    if not GAMMA_RANGE[0] <= gamma <= GAMMA_RANGE[1]:
        raise ValueError(f"gamma must lie in [{GAMMA_RANGE[0]:g}, {GAMMA_RANGE[1]:g}]")
    if samples_per_wavelength < 8:
        raise ValueError("samples_per_wavelength must be at least 8")
    cap = point_budget() if budget is None else budget
    step = 2 * math.pi / gamma / samples_per_wavelength
    npts = int(math.floor(xi_max_over_gamma * gamma / step)) + 1
    if npts > cap:
        raise BudgetExceeded(f"{npts} grid points exceed the budget of {cap}")
    xi = np.arange(npts) * step
    g = vtw_gamma_rescaled(xi, gamma, budget=cap, workers=workers)

    def fun(x):
        return vtw_gamma_rescaled(x, gamma, budget=cap)

    a = np.abs(g)
    extrema = []
    for i in range(1, npts - 1):
        if a[i] >= a[i - 1] and a[i] > a[i + 1]:
            extrema.append(_refine_peak(fun, xi[i - 1], xi[i + 1]))
            if len(extrema) == n_extrema:
                break
    plateau = float(np.mean([abs(v) for _, v in extrema])) if extrema else math.nan

    zeros = [0.0]
    for i in range(1, npts - 1):
        if g[i] == 0.0:
            zeros.append(float(xi[i]))
        elif g[i] * g[i + 1] < 0:
            zeros.append(brentq(fun, xi[i], xi[i + 1], xtol=1e-14))
    zeros_arr = np.array(zeros)
    wavelength = 2 * float(np.mean(np.diff(zeros_arr))) if len(zeros) > 1 else math.nan
    return PathologyProfile(gamma, xi, g, plateau, wavelength, extrema, zeros_arr)


def envelope_decay(gamma: float, xi_over_gamma_grid, samples: int = 33) -> list[float]:
    """Local maximum of ``|g|`` within one wavelength around each ``xi/gamma``."""
    grid = np.asarray(xi_over_gamma_grid, dtype=float)
    if np.any(grid <= 0) or np.any(grid > 2):
        raise ValueError("xi/gamma values must lie in (0, 2]")
    lam = 2 * math.pi / gamma

    def fun(x):
        return vtw_gamma_rescaled(x, gamma)

    out = []
    for r in grid:
        centre = r * gamma
        local = np.linspace(max(0.0, centre - lam / 2), centre + lam / 2, samples)
        vals = np.abs(vtw_gamma_rescaled(local, gamma))
        i = int(np.argmax(vals))
        lo, hi = local[max(i - 1, 0)], local[min(i + 1, samples - 1)]
        out.append(abs(_refine_peak(fun, lo, hi)[1]))
    return out


# -- moments of v^TW - 1 ---------------------------------------------------------------


def tw_deviation_moment(p: int) -> Fraction:
    """Closed-form ``int_0^inf xi**p (v^TW(xi) - 1) dxi``."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    if p % 2 == 0:
        return Fraction(0)
    sign = -1 if (p - 1) // 2 % 2 else 1
    return Fraction(sign * double_factorial(p), (p + 1) * 2 ** ((p + 1) // 2))


def tw_deviation_moment_from_series(p: int, order: int) -> Fraction:
    """Moment ``M_p`` read off the Taylor series of ``(exp(-s**2/4) - 1)/s``.

    The coefficient of ``s**p`` is ``(-1)**p M_p / p!``; the series is built
    exactly in rational arithmetic.
    """
    if order < p:
        raise ValueError("order must be at least p")
    e = series_exp([Fraction(0), Fraction(0), Fraction(-1, 4)], order + 2)
    coeff = e[p + 1]
    return (-1) ** p * math.factorial(p) * coeff
