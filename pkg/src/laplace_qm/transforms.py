"""Forward and inverse Laplace transforms on the PolyExp function class.

``PolyExp`` holds functions of the form ``sum c * xi**k * exp(-b * xi)`` plus
an optional distributional part ``sum d * delta^(k)(xi)``.  The smooth part
maps to rational functions of ``s``; the distributional part is what
nonnegative powers of ``s`` invert to.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from numbers import Number
from typing import Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    ContourThroughPole,
    DivergentMoment,
    NotInvertible,
    UnsupportedInput,
)
from .sdomain import (
    DROP_TOL,
    POLE_TOL,
    GeneralTerm,
    LaurentSeries,
    SDomainFn,
    partial_fractions,
)

DEFAULT_POINT_BUDGET = 10**7


def point_budget() -> int:
    """Quadrature node cap; ``BROMWICH_POINT_BUDGET`` overrides the default."""
    raw = os.environ.get("BROMWICH_POINT_BUDGET")
    return int(float(raw)) if raw else DEFAULT_POINT_BUDGET


def _same_decay(a: float, b: float) -> bool:
    return abs(a - b) <= POLE_TOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class PolyExp:
    """``sum coeff * xi**power * exp(-decay * xi) + sum coeff * delta^(order)(xi)``.

    ``smooth`` holds ``(coeff, power, decay)`` triples and ``delta`` holds
    ``(coeff, order)`` pairs.  Like terms are merged and zeros dropped.
    """

    smooth: tuple[tuple[float, int, float], ...] = ()
    delta: tuple[tuple[float, int], ...] = ()

    def __post_init__(self):
        merged: list[list] = []
        for c, k, b in self.smooth:
            k, b = int(k), float(b) + 0.0  # no negative zero decays
            for m in merged:
                if m[1] == k and _same_decay(m[2], b):
                    m[0] += float(c)
                    m[3] = max(m[3], abs(float(c)))
                    break
            else:
                merged.append([float(c), k, b, abs(float(c))])
        smooth = tuple(
            sorted(
                ((c, k, b) for c, k, b, sc in merged if abs(c) > DROP_TOL * max(1.0, sc)),
                key=lambda t: (t[2], t[1]),
            )
        )
        deltas: dict[int, float] = {}
        for d, k in self.delta:
            deltas[int(k)] = deltas.get(int(k), 0.0) + float(d)
        delta = tuple((d, k) for k, d in sorted(deltas.items()) if d != 0.0)
        object.__setattr__(self, "smooth", smooth)
        object.__setattr__(self, "delta", delta)

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> PolyExp:
        return cls(tuple((c, k, 0.0) for k, c in enumerate(coeffs)))

    @classmethod
    def term(cls, coeff: float, power: int = 0, decay: float = 0.0) -> PolyExp:
        return cls(((coeff, power, decay),))

    @property
    def is_distributional(self) -> bool:
        return bool(self.delta)

    @property
    def smooth_part(self) -> PolyExp:
        return PolyExp(self.smooth)

    def __add__(self, other):
        if not isinstance(other, PolyExp):
            return NotImplemented
        return PolyExp(self.smooth + other.smooth, self.delta + other.delta)

    def __mul__(self, k):
        if not isinstance(k, Number):
            return NotImplemented
        k = float(k)
        return PolyExp(
            tuple((c * k, p, b) for c, p, b in self.smooth),
            tuple((d * k, o) for d, o in self.delta),
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def mul_xi(self) -> PolyExp:
        if self.delta:
            raise UnsupportedInput("xi * delta^(k) is not tracked")
        return PolyExp(tuple((c, p + 1, b) for c, p, b in self.smooth))

    def derivative(self) -> PolyExp:
        """Derivative of the smooth part (distributional part is dropped)."""
        out = []
        for c, p, b in self.smooth:
            if p:
                out.append((c * p, p - 1, b))
            if b:
                out.append((-b * c, p, b))
        return PolyExp(tuple(out))

    def __call__(self, xi):
        if self.delta:
            raise UnsupportedInput("distributional terms cannot be evaluated pointwise")
        xi = np.asarray(xi, dtype=float)
        out = np.zeros_like(xi)
        for c, p, b in self.smooth:
            out = out + c * xi**p * np.exp(-b * xi)
        return out if out.ndim else float(out)

    def allclose(self, other: PolyExp, tol: float = 1e-12) -> bool:
        diff = self - other
        scale = max(
            [1.0] + [abs(c) for c, _, _ in self.smooth + other.smooth]
            + [abs(d) for d, _ in self.delta + other.delta]
        )
        return all(abs(c) <= tol * scale for c, _, _ in diff.smooth) and all(
            abs(d) <= tol * scale for d, _ in diff.delta
        )

    def __str__(self) -> str:
        parts = []
        for c, p, b in self.smooth:
            s = f"{c:.12g}"
            if p:
                s += "*xi" if p == 1 else f"*xi^{p}"
            if b:
                s += f"*exp({-b:.12g}*xi)"
            parts.append(s)
        for d, k in self.delta:
            parts.append(f"{d:.12g}*delta" + (f"^({k})" if k else "") + "(xi)")
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {
            "smooth": [{"coeff": c, "power": p, "decay": b} for c, p, b in self.smooth],
            "delta": [{"coeff": d, "order": k} for d, k in self.delta],
        }


def forward_laplace(f: PolyExp) -> SDomainFn:
    """Exact transform, ``xi**k exp(-b xi) -> k! / (s + b)**(k + 1)``."""
    if f.is_distributional:
        raise UnsupportedInput("forward transform of delta terms is not supported")
    return SDomainFn(
        tuple(
            GeneralTerm(c * math.factorial(p), ((-b, -(p + 1.0)),)) for c, p, b in f.smooth
        )
    )


def inverse_by_residues(F: SDomainFn) -> PolyExp:
    """Invert a rational function (plus polynomial part) exactly.

    Each pole ``b`` of order ``m`` contributes the residue of ``exp(s xi) F(s)``,
    i.e. ``sum_j c_j xi**(j-1) exp(b xi) / (j-1)!``.  The polynomial part is not
    dropped: ``s**k`` becomes ``delta^(k)(xi)``.
    """
    if not F.is_rational:
        raise NotInvertible(
            "residue inversion needs a rational F(s); use bromwich_invert instead"
        )
    pf = partial_fractions(F)
    smooth = [
        (c / math.factorial(j - 1), j - 1, -b)
        for b, cs in pf.poles.items()
        for j, c in enumerate(cs, start=1)
    ]
    delta = [(c, k) for k, c in enumerate(pf.polynomial)]
    return PolyExp(tuple(smooth), tuple(delta))


# -- numerical Bromwich inversion ------------------------------------------------


@dataclass(frozen=True)
class BromwichSample:
    """``value = mantissa * exp(exponent)``."""

    mantissa: float
    exponent: float

    @property
    def value(self) -> float:
        if self.mantissa == 0.0:
            return 0.0
        try:
            return self.mantissa * math.exp(self.exponent)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    @property
    def log_abs(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights for ``n`` (even) intervals of width ``h``."""
    if n % 2:
        raise ValueError("Simpson's rule needs an even number of intervals")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def bromwich_step(xi: float, gamma: float) -> float:
    return min(2 * math.pi / (40 * max(xi, 1.0)), 1.0 / (5 * gamma))


def bromwich_invert(
    F: SDomainFn, xi: float, a: float, gamma: float, budget: int | None = None
) -> BromwichSample:
    """Truncated Bromwich integral ``(1/2 pi i) int_{a-i gamma}^{a+i gamma} e^{s xi} F(s) ds``.

    Uses conjugate symmetry of real-valued transforms to integrate
    ``(1/pi) Re[e^{s xi} F(s)]`` over ``y in [0, gamma]`` with composite Simpson.
    The integrand is accumulated in log space and shifted by its maximum real
    part, which becomes the returned exponent, so exponentially growing
    transforms such as ``exp(-s**2/4)/s`` stay in range.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if xi < 0:
        raise ValueError("xi must be nonnegative")
    sing = F.singularities()
    if sing and a <= max(sing):
        raise ContourThroughPole(
            f"contour Re(s) = {a:g} is not right of the singularity at {max(sing):g}"
        )
    if F.is_zero:
        return BromwichSample(0.0, 0.0)
    h = bromwich_step(xi, gamma)
    n = math.ceil(gamma / h)
    n += n % 2
    cap = point_budget() if budget is None else budget
    if n + 1 > cap:
        raise BudgetExceeded(f"{n + 1} quadrature nodes exceed the budget of {cap}")
    y = np.linspace(0.0, gamma, n + 1)
    s = a + 1j * y
    logs = [t.log_value(s) + s * xi for t in F.terms]
    shift = max(0.0, max(float(np.max(lg.real)) for lg in logs))
    integrand = np.zeros(n + 1)
    for lg in logs:
        integrand += np.exp(lg - shift).real
    mantissa = float(integrand @ simpson_weights(n, gamma / n)) / math.pi
    return BromwichSample(mantissa, shift)


# -- moments ------------------------------------------------------------------------


class _Divergent:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Divergent"


#: Marker for a moment integral that does not converge.
Divergent = _Divergent()


@dataclass(frozen=True)
class MomentVector:
    """``M_p`` for ``p = 0..P``; entries are floats or :data:`Divergent`."""

    values: tuple

    @property
    def divergent(self) -> bool:
        return any(v is Divergent for v in self.values)

    def __getitem__(self, p: int):
        return self.values[p]

    def __len__(self):
        return len(self.values)


def moments(f: PolyExp, max_p: int) -> MomentVector:
    """Closed-form moments ``int_0^inf xi**p f(xi) dxi`` for ``p <= max_p``."""
    if f.is_distributional:
        raise UnsupportedInput("moments of delta terms are not supported")
    if any(b <= 0 for _, _, b in f.smooth):
        return MomentVector((Divergent,) * (max_p + 1))
    vals = []
    for p in range(max_p + 1):
        vals.append(
            sum(
                c * math.factorial(p + k) / b ** (p + k + 1) for c, k, b in f.smooth
            )
        )
    return MomentVector(tuple(float(v) for v in vals))


def series_from_moments(m: MomentVector) -> LaurentSeries:
    """Taylor series ``F(s) = sum (-1)**p M_p s**p / p!`` about ``s = 0``."""
    if m.divergent:
        raise DivergentMoment("series needs every moment to be finite")
    coeffs = {p: (-1) ** p * mp / math.factorial(p) for p, mp in enumerate(m.values)}
    return LaurentSeries(coeffs, len(m), 0.0)
