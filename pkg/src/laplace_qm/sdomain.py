"""Algebra of s-domain functions.

An :class:`SDomainFn` is a finite sum of generalized terms

    coeff * prod_i (s - a_i)**p_i * exp(q(s))

with real pole/branch locations ``a_i``, real exponents ``p_i`` and a real
polynomial ``q``.  The class is closed under addition, scalar multiplication,
multiplication (by ``s`` or by another SDomainFn) and differentiation, which
is all that is needed to write down transforms such as ``1/(s + 1/2)``,
``exp(-s**2/4)/s`` or ``(s - 1/2)**(2c - 1) / (s + 1/2)`` and to check the
transformed differential equations they obey.

Purely rational functions (integer exponents, no exponential factor) can be
split into partial fractions exactly, which is what the residue inversion in
:mod:`laplace_qm.transforms` relies on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from numbers import Number
from typing import Iterable, Sequence

import numpy as np

from .errors import BranchDomain, NotExpandable, PoleEvaluation, UnsupportedInput

#: Pole locations closer than this (relative) are treated as the same pole.
POLE_TOL = 1e-12
#: Coefficients that cancel below this fraction of their inputs are dropped.
DROP_TOL = 1e-14


def _is_int(p: float) -> bool:
    return float(p).is_integer()


def _snap_exponent(p: float) -> float:
    r = round(p)
    if abs(p - r) < POLE_TOL:
        return float(r)
    return float(p)


def _same_pole(a: float, b: float) -> bool:
    return abs(a - b) <= POLE_TOL * max(1.0, abs(a), abs(b))


def _trim(coeffs: Sequence[float]) -> tuple[float, ...]:
    out = [float(c) for c in coeffs]
    while out and out[-1] == 0.0:
        out.pop()
    return tuple(out)


def binomial_coefficients(p: float, n: int) -> list[float]:
    """Generalized binomial coefficients ``C(p, j)`` for ``j < n``."""
    out = [1.0]
    for j in range(1, n):
        out.append(out[-1] * (p - j + 1) / j)
    return out[:n]


def series_exp(q: Sequence, n: int) -> list:
    """First ``n`` Taylor coefficients of ``exp(q(s))`` about ``s = 0``.

    ``q`` must have ``q[0] == 0``.  Works for any numeric type supporting
    ``+``, ``*`` and division by an int (floats, ``Fraction``...).
    """
    if n <= 0:
        return []
    zero = q[0] * 0 if len(q) else 0
    if len(q) and q[0] != 0:
        raise ValueError("series_exp expects a polynomial with zero constant term")
    out = [zero + 1]
    for k in range(1, n):
        acc = zero
        for j in range(1, min(k, len(q) - 1) + 1):
            acc = acc + j * q[j] * out[k - j]
        out.append(acc / k)
    return out


def _series_mul(x: Sequence[float], y: Sequence[float], n: int) -> list[float]:
    out = [0.0] * n
    for i, xi in enumerate(x[:n]):
        if xi == 0.0:
            continue
        for j, yj in enumerate(y[: n - i]):
            out[i + j] += xi * yj
    return out


def _shifted_power_series(p: float, d: float, n: int) -> list[float]:
    """Coefficients of ``x**j`` (``j < n``) in ``(x + d)**p`` with ``d != 0``."""
    if not _is_int(p) and d < 0:
        raise NotExpandable(f"(x {d:+g})**{p:g} has no real expansion about x = 0")
    binom = binomial_coefficients(p, n)
    return [b * d ** (p - j) for j, b in enumerate(binom)]


@dataclass(frozen=True)
class GeneralTerm:
    """``coeff * prod (s - a_i)**p_i * exp(sum_k q_k s**k)``.

    A constant term of ``exp_poly`` is folded into ``coeff`` on construction,
    factors are merged by pole location and sorted, zero exponents vanish.
    """

    coeff: float
    factors: tuple[tuple[float, float], ...] = ()
    exp_poly: tuple[float, ...] = ()

    def __post_init__(self):
        coeff = float(self.coeff)
        q = list(_trim(self.exp_poly))
        if q:
            coeff *= math.exp(q[0])
            q[0] = 0.0
        merged: list[list[float]] = []
        for a, p in sorted((float(a), float(p)) for a, p in self.factors):
            if merged and _same_pole(merged[-1][0], a):
                merged[-1][1] += p
            else:
                merged.append([a, p])
        factors = tuple(
            (a, _snap_exponent(p)) for a, p in merged if _snap_exponent(p) != 0.0
        )
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "exp_poly", _trim(q))

    @property
    def key(self):
        return self.factors, self.exp_poly

    @property
    def is_rational(self) -> bool:
        return not self.exp_poly and all(_is_int(p) for _, p in self.factors)

    @property
    def degree(self) -> float:
        """Total power of ``s`` at infinity, ignoring the exponential."""
        return sum(p for _, p in self.factors)

    def scaled(self, k: float) -> GeneralTerm:
        return GeneralTerm(self.coeff * k, self.factors, self.exp_poly)

    def __mul__(self, other: GeneralTerm) -> GeneralTerm:
        n = max(len(self.exp_poly), len(other.exp_poly))
        q = [0.0] * n
        for i, c in enumerate(self.exp_poly):
            q[i] += c
        for i, c in enumerate(other.exp_poly):
            q[i] += c
        return GeneralTerm(
            self.coeff * other.coeff, self.factors + other.factors, tuple(q)
        )

    def derivative(self) -> list[GeneralTerm]:
        out = []
        for i, (a, p) in enumerate(self.factors):
            fac = list(self.factors)
            fac[i] = (a, p - 1.0)
            out.append(GeneralTerm(self.coeff * p, tuple(fac), self.exp_poly))
        for j, qj in enumerate(self.exp_poly):
            if j == 0 or qj == 0.0:
                continue
            fac = self.factors + ((0.0, float(j - 1)),)
            out.append(GeneralTerm(self.coeff * j * qj, fac, self.exp_poly))
        return out

    def evaluate(self, s):
        is_complex = isinstance(s, complex)
        val = self.coeff
        for a, p in self.factors:
            z = s - a
            if z == 0:
                if p < 0:
                    raise PoleEvaluation(f"s = {s} is a pole of order {-p:g}")
                return 0.0 * val
            if not _is_int(p):
                if is_complex and s.imag != 0.0:
                    raise BranchDomain(
                        f"non-integer power (s - {a:g})**{p:g} evaluated off the real axis"
                    )
                if z.real < 0:
                    raise BranchDomain(
                        f"(s - {a:g})**{p:g} evaluated left of its branch point"
                    )
                z = z.real
            val = val * z**p
        if self.exp_poly:
            q = sum(c * s**k for k, c in enumerate(self.exp_poly))
            val = val * (cmath.exp(q) if is_complex else math.exp(q))
        return val

    def log_value(self, s: np.ndarray) -> np.ndarray:
        """Complex logarithm of the term on an array of ``s`` (principal branch)."""
        s = np.asarray(s, dtype=complex)
        out = np.full(s.shape, cmath.log(complex(self.coeff)), dtype=complex)
        for a, p in self.factors:
            out += p * np.log(s - a)
        for k, c in enumerate(self.exp_poly):
            out += c * s**k
        return out

    def __str__(self) -> str:
        parts = [f"{self.coeff:.12g}"]
        for a, p in self.factors:
            base = "s" if a == 0 else f"(s{-a:+.12g})"
            parts.append(base if p == 1 else f"{base}^{p:.12g}")
        if self.exp_poly:
            q = " ".join(
                f"{c:+.12g}*s^{k}" for k, c in enumerate(self.exp_poly) if c != 0
            )
            parts.append(f"exp({q})")
        return "*".join(parts)

    def to_dict(self) -> dict:
        return {
            "coeff": self.coeff,
            "factors": [[a, p] for a, p in self.factors],
            "exp_poly": list(self.exp_poly),
        }


def _combine(terms: Iterable[GeneralTerm]) -> tuple[GeneralTerm, ...]:
    sums: dict = {}
    scale: dict = {}
    for t in terms:
        sums[t.key] = sums.get(t.key, 0.0) + t.coeff
        scale[t.key] = max(scale.get(t.key, 0.0), abs(t.coeff))
    out = []
    for key, c in sums.items():
        if abs(c) <= DROP_TOL * max(1.0, scale[key]):
            continue
        out.append(GeneralTerm(c, *key))
    out.sort(key=lambda t: (t.factors, t.exp_poly))
    return tuple(out)


@dataclass(frozen=True)
class SDomainFn:
    """A finite sum of :class:`GeneralTerm` objects."""

    terms: tuple[GeneralTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", _combine(self.terms))

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c: float) -> SDomainFn:
        return cls((GeneralTerm(c),))

    @classmethod
    def power(cls, p: float, coeff: float = 1.0) -> SDomainFn:
        """``coeff * s**p``."""
        return cls((GeneralTerm(coeff, ((0.0, p),)),))

    @classmethod
    def shifted_power(cls, a: float, p: float, coeff: float = 1.0) -> SDomainFn:
        """``coeff * (s - a)**p``."""
        return cls((GeneralTerm(coeff, ((a, p),)),))

    @classmethod
    def exponential(cls, q: Sequence[float], coeff: float = 1.0) -> SDomainFn:
        """``coeff * exp(q[0] + q[1] s + q[2] s**2 + ...)``."""
        return cls((GeneralTerm(coeff, (), tuple(q)),))

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> SDomainFn:
        """Polynomial in ``s`` with ascending coefficients."""
        return cls(tuple(GeneralTerm(c, ((0.0, float(k)),)) for k, c in enumerate(coeffs)))

    # -- algebra ------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Number):
            other = SDomainFn.constant(other)
        if not isinstance(other, SDomainFn):
            return NotImplemented
        return SDomainFn(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return SDomainFn(tuple(t.scaled(float(other)) for t in self.terms))
        if isinstance(other, SDomainFn):
            return SDomainFn(tuple(a * b for a in self.terms for b in other.terms))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, k):
        if not isinstance(k, Number):
            return NotImplemented
        return self * (1.0 / k)

    def mul_s(self, power: float = 1.0) -> SDomainFn:
        return self * SDomainFn.power(power)

    def differentiate(self) -> SDomainFn:
        return SDomainFn(tuple(d for t in self.terms for d in t.derivative()))

    # -- queries ------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_rational(self) -> bool:
        return all(t.is_rational for t in self.terms)

    def singularities(self) -> list[float]:
        """Poles and branch points (locations whose factor is not entire)."""
        locs = {a for t in self.terms for a, p in t.factors if p < 0 or not _is_int(p)}
        return sorted(locs)

    def evaluate(self, s):
        return sum((t.evaluate(s) for t in self.terms), 0.0)

    __call__ = evaluate

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(t) for t in self.terms)

    def to_dict(self) -> list[dict]:
        return [t.to_dict() for t in self.terms]

    def allclose(self, other: SDomainFn, tol: float = 1e-12) -> bool:
        """Term-by-term comparison after merging."""
        diff = self - other
        scale = max([1.0] + [abs(t.coeff) for t in self.terms + other.terms])
        return all(abs(t.coeff) <= tol * scale for t in diff.terms)


def differentiate(f: SDomainFn) -> SDomainFn:
    return f.differentiate()


def evaluate(f: SDomainFn, s):
    return f.evaluate(s)


# -- partial fractions ----------------------------------------------------------


@dataclass(frozen=True)
class PartialFractions:
    """``polynomial(s) + sum_b sum_j residues[b][j-1] * (s - b)**(-j)``."""

    poles: dict = field(default_factory=dict)
    polynomial: tuple[float, ...] = ()

    def to_sdomain(self) -> SDomainFn:
        terms = [
            GeneralTerm(c, ((b, -float(j)),))
            for b, cs in self.poles.items()
            for j, c in enumerate(cs, start=1)
        ]
        return SDomainFn(tuple(terms)) + SDomainFn.polynomial(self.polynomial)

    def evaluate(self, s):
        val = sum((c * s**k for k, c in enumerate(self.polynomial)), 0.0)
        for b, cs in self.poles.items():
            for j, c in enumerate(cs, start=1):
                val = val + c * (s - b) ** (-j)
        return val


def _term_partial_fractions(t: GeneralTerm):
    poles = {}
    for idx, (b, p) in enumerate(t.factors):
        if p >= 0:
            continue
        m = int(-p)
        taylor = [t.coeff] + [0.0] * (m - 1)
        for jdx, (a, q) in enumerate(t.factors):
            if jdx != idx:
                taylor = _series_mul(taylor, _shifted_power_series(q, b - a, m), m)
        poles[b] = [taylor[m - j] for j in range(1, m + 1)]
    deg = int(t.degree)
    poly: list[float] = []
    if deg >= 0:
        series = [t.coeff] + [0.0] * deg
        for a, q in t.factors:
            binom = binomial_coefficients(q, deg + 1)
            series = _series_mul(
                series, [c * (-a) ** j for j, c in enumerate(binom)], deg + 1
            )
        # series[k] multiplies s**(deg - k)
        poly = [series[deg - k] for k in range(deg + 1)]
    return poles, poly


def partial_fractions(f: SDomainFn) -> PartialFractions:
    """Exact partial-fraction decomposition of a purely rational function."""
    if not f.is_rational:
        raise UnsupportedInput("partial fractions need integer exponents and no exponential")
    poles: dict[float, list[float]] = {}
    poly: list[float] = []
    for t in f.terms:
        tp, tpoly = _term_partial_fractions(t)
        for b, cs in tp.items():
            key = next((k for k in poles if _same_pole(k, b)), b)
            acc = poles.setdefault(key, [])
            acc.extend([0.0] * (len(cs) - len(acc)))
            for j, c in enumerate(cs):
                acc[j] += c
        poly.extend([0.0] * (len(tpoly) - len(poly)))
        for k, c in enumerate(tpoly):
            poly[k] += c
    clean = {}
    for b, cs in sorted(poles.items()):
        scale = max([1.0] + [abs(c) for c in cs])
        cs = [0.0 if abs(c) <= DROP_TOL * scale else c for c in cs]
        cs = list(_trim(cs))
        if cs:
            clean[b] = tuple(cs)
    return PartialFractions(clean, _trim(poly))


# -- Laurent / Taylor expansion ---------------------------------------------------


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated power series in ``s`` about ``point`` (``0.0`` or ``inf``).

    ``coeffs`` maps integer powers of ``s`` to coefficients.  About ``0`` every
    power below ``order`` is exact; about infinity the coefficients ``V_k`` of
    ``s**-(k+1)`` are exact for ``k < order`` and nonnegative powers are kept
    in full.
    """

    coeffs: dict
    order: int
    point: float = 0.0

    def __post_init__(self):
        clean = {int(k): float(v) for k, v in sorted(self.coeffs.items()) if v != 0.0}
        object.__setattr__(self, "coeffs", clean)

    def __getitem__(self, power: int) -> float:
        return self.coeffs.get(power, 0.0)

    @property
    def min_power(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    @classmethod
    def from_inverse_powers(cls, vk: Sequence[float]) -> LaurentSeries:
        """Series ``sum_k vk[k] * s**-(k+1)`` about infinity."""
        return cls({-(k + 1): v for k, v in enumerate(vk)}, len(vk), math.inf)

    def inverse_power_coefficients(self) -> list[float]:
        """``[V_0, V_1, ..., V_{order-1}]`` for a series about infinity."""
        return [self[-(k + 1)] for k in range(self.order)]

    def to_sdomain(self) -> SDomainFn:
        return SDomainFn(
            tuple(GeneralTerm(c, ((0.0, float(k)),)) for k, c in self.coeffs.items())
        )


def _expand_at_zero(t: GeneralTerm, order: int) -> dict[int, float]:
    shift = 0
    regular = []
    for a, p in t.factors:
        if a == 0.0:
            if not _is_int(p):
                raise NotExpandable(f"s**{p:g} has a branch point at the expansion point")
            shift += int(p)
        else:
            regular.append((a, p))
    n = order - shift
    if n <= 0:
        return {}
    series = [t.coeff] + [0.0] * (n - 1)
    for a, p in regular:
        series = _series_mul(series, _shifted_power_series(p, -a, n), n)
    if t.exp_poly:
        series = _series_mul(series, series_exp(list(t.exp_poly), n), n)
    return {k + shift: c for k, c in enumerate(series) if c != 0.0}


def _expand_at_infinity(t: GeneralTerm, order: int) -> dict[int, float]:
    if t.exp_poly:
        raise NotExpandable("exp(q(s)) has an essential singularity at infinity")
    if not all(_is_int(p) for _, p in t.factors):
        raise NotExpandable("non-integer powers cannot be expanded about infinity")
    deg = int(t.degree)
    n = max(deg + 1 + order, 0)
    series = [t.coeff] + [0.0] * max(n - 1, 0)
    for a, p in t.factors:
        binom = binomial_coefficients(p, n)
        series = _series_mul(series, [c * (-a) ** j for j, c in enumerate(binom)], n)
    return {deg - k: c for k, c in enumerate(series) if c != 0.0}


def laurent_expand(f: SDomainFn, order: int, point: float = 0.0) -> LaurentSeries:
    """Expand ``f`` about ``s = 0`` (powers below ``order``) or about infinity.

    About ``0`` every factor ``(s - a)**p`` with ``a != 0`` and the exponential
    are Taylor expanded; integer powers of ``s`` itself shift the series, so
    ``exp(-s**2/4)/s`` gives ``1/s - s/4 + s**3/32 - ...``.  About infinity
    (``point=math.inf``) only rational terms are accepted.
    """
    out: dict[int, float] = {}
    if point == 0.0:
        for t in f.terms:
            for k, c in _expand_at_zero(t, order).items():
                out[k] = out.get(k, 0.0) + c
    elif math.isinf(point):
        for t in f.terms:
            for k, c in _expand_at_infinity(t, order).items():
                out[k] = out.get(k, 0.0) + c
    else:
        raise NotExpandable("expansion is supported about s = 0 and s = infinity only")
    return LaurentSeries(out, order, point)
