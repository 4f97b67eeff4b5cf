"""Harmonic, Morse and modified Poschl-Teller oscillators via Laplace transforms.

For each oscillator the wavefunction is written as ``psi(x) = prefactor(xi) *
v(xi)`` in a scaled variable ``xi``.  ``v`` obeys a second-order ODE whose
Laplace transform ``V(s)`` obeys a lower-order, *inhomogeneous* ODE: the
boundary values ``v0 = v(0)`` and ``v0' = v'(0)`` enter through the derivative
rule.  The module builds the physical states, their transforms and the two
ODEs, and it can check any ``(V, v0, v0')`` triple against the transformed
equation.  That check is what separates the correct ``V(s)`` from the
``V^TW(s)`` obtained by pretending ``v0 = v0' = 0``.

Energies are dimensionless: units of ``hbar*omega`` for the harmonic
oscillator and ``alpha**2 hbar**2 / 2m`` for Morse and Poschl-Teller.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    DomainError,
    InvalidQuantumNumber,
    NoBoundStates,
    UnsupportedExcitation,
    UnsupportedInput,
)
from .sdomain import LaurentSeries, SDomainFn
from .specfun import mod_sph_bessel_k_sdomain
from .transforms import PolyExp, forward_laplace, inverse_by_residues

HARMONIC = "harmonic"
MORSE = "morse"
POSCHL_TELLER = "poschl_teller"
KINDS = (HARMONIC, MORSE, POSCHL_TELLER)


@dataclass(frozen=True)
class Oscillator:
    """Oscillator descriptor.

    ``c`` is the Morse strength ``sqrt(2 m A)/(alpha hbar)`` and ``ell`` the
    Poschl-Teller depth parameter with ``ell (ell + 1) = 2 m A/(alpha hbar)**2``.
    The physical constants only matter for the ``x <-> xi`` maps and the
    potential; they default to 1 (dimensionless units).
    """

    kind: str
    c: float | None = None
    ell: float | None = None
    mass: float = 1.0
    hbar: float = 1.0
    omega: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown oscillator kind {self.kind!r}")
        if self.kind == MORSE and not (self.c is not None and self.c > 0):
            raise ValueError("Morse requires c > 0")
        if self.kind == POSCHL_TELLER and not (self.ell is not None and self.ell > 0):
            raise ValueError("Poschl-Teller requires ell > 0")
        if min(self.mass, self.hbar, self.omega, self.alpha) <= 0:
            raise ValueError("physical constants must be positive")

    @classmethod
    def harmonic(cls, **phys) -> Oscillator:
        return cls(HARMONIC, **phys)

    @classmethod
    def morse(cls, c: float, **phys) -> Oscillator:
        return cls(MORSE, c=float(c), **phys)

    @classmethod
    def poschl_teller(cls, ell: float, **phys) -> Oscillator:
        return cls(POSCHL_TELLER, ell=float(ell), **phys)

    @classmethod
    def from_depth(cls, kind: str, depth: float, alpha: float = 1.0,
                   mass: float = 1.0, hbar: float = 1.0) -> Oscillator:
        """Morse or Poschl-Teller oscillator from the well depth ``A``."""
        u = 2 * mass * depth / (alpha * hbar) ** 2
        if kind == MORSE:
            return cls(MORSE, c=math.sqrt(u), mass=mass, hbar=hbar, alpha=alpha)
        if kind == POSCHL_TELLER:
            ell = 0.5 * (math.sqrt(1 + 4 * u) - 1)
            return cls(POSCHL_TELLER, ell=ell, mass=mass, hbar=hbar, alpha=alpha)
        raise ValueError("from_depth applies to Morse and Poschl-Teller only")

    @property
    def energy_unit(self) -> str:
        return "hbar*omega" if self.kind == HARMONIC else "alpha^2*hbar^2/(2m)"

    @property
    def depth(self) -> float:
        """Well depth ``A`` (Morse and Poschl-Teller)."""
        unit = (self.alpha * self.hbar) ** 2 / (2 * self.mass)
        if self.kind == MORSE:
            return self.c**2 * unit
        if self.kind == POSCHL_TELLER:
            return self.ell * (self.ell + 1) * unit
        raise AttributeError("the harmonic oscillator has no depth parameter")

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == HARMONIC:
            return 0.5 * self.mass * self.omega**2 * x**2
        if self.kind == MORSE:
            e = np.exp(-self.alpha * x)
            return self.depth * (e**2 - 2 * e)
        return -self.depth / np.cosh(self.alpha * x) ** 2


@dataclass(frozen=True)
class BoundState:
    """One eigenstate: ``v(xi)``, its transform ``V(s)`` and ``(v0, v0')``."""

    n: int
    energy_param: float
    v: PolyExp
    V: SDomainFn
    v0: float
    v0prime: float


# -- scaled variables ------------------------------------------------------------


def scale_to_xi(osc: Oscillator, x):
    x = np.asarray(x, dtype=float)
    if osc.kind == HARMONIC:
        out = math.sqrt(osc.mass * osc.omega / osc.hbar) * x
    elif osc.kind == MORSE:
        out = 2 * osc.c * np.exp(-osc.alpha * x)
    else:
        out = np.tanh(osc.alpha * x)
    return out if out.ndim else float(out)


def scale_from_xi(osc: Oscillator, xi):
    xi = np.asarray(xi, dtype=float)
    if osc.kind == HARMONIC:
        out = xi / math.sqrt(osc.mass * osc.omega / osc.hbar)
    elif osc.kind == MORSE:
        if np.any(xi <= 0):
            raise DomainError("Morse xi must be positive")
        out = -np.log(xi / (2 * osc.c)) / osc.alpha
    else:
        if np.any(np.abs(xi) >= 1):
            raise DomainError("Poschl-Teller xi must satisfy |xi| < 1")
        out = np.arctanh(xi) / osc.alpha
    return out if out.ndim else float(out)


# -- quantization and energies -----------------------------------------------------


def quantize(osc: Oscillator, n_max: int | None = None) -> Iterable[int]:
    """Allowed quantum numbers.

    Harmonic states are unbounded: without ``n_max`` an endless iterator is
    returned.  Morse needs ``n < c - 1/2``; Poschl-Teller needs
    ``mu = ell - n > 0``.
    """
    if osc.kind == HARMONIC:
        return itertools.count() if n_max is None else list(range(n_max + 1))
    if osc.kind == MORSE:
        allowed = [n for n in range(math.ceil(osc.c)) if n < osc.c - 0.5]
        if not allowed:
            raise NoBoundStates(
                f"Morse with c = {osc.c:g} has no bound states (requires c > 1/2)"
            )
    else:
        allowed = [n for n in range(math.ceil(osc.ell)) if osc.ell - n > 0]
    if n_max is not None:
        allowed = [n for n in allowed if n <= n_max]
    return allowed


def _check_quantum_number(osc: Oscillator, n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise InvalidQuantumNumber(f"quantum number must be a nonnegative integer, got {n}")
    n = int(n)
    if osc.kind == MORSE and not n < osc.c - 0.5:
        raise InvalidQuantumNumber(f"Morse requires n < c - 1/2 (n = {n}, c = {osc.c:g})")
    if osc.kind == POSCHL_TELLER and not osc.ell - n > 0:
        raise InvalidQuantumNumber(
            f"Poschl-Teller requires mu = ell - n > 0 (n = {n}, ell = {osc.ell:g})"
        )
    return n


def energy_parameter(osc: Oscillator, n: int) -> float:
    """``n`` for harmonic and Morse, ``mu = ell - n`` for Poschl-Teller."""
    return float(osc.ell - n) if osc.kind == POSCHL_TELLER else float(n)


def eigenenergy(osc: Oscillator, n: int) -> float:
    n = _check_quantum_number(osc, n)
    if osc.kind == HARMONIC:
        return n + 0.5
    if osc.kind == MORSE:
        return -((osc.c - 0.5 - n) ** 2)
    return -((osc.ell - n) ** 2)


def physical_energy(osc: Oscillator, n: int) -> float:
    """Energy in the units of the oscillator's physical constants."""
    if osc.kind == HARMONIC:
        unit = osc.hbar * osc.omega
    else:
        unit = (osc.alpha * osc.hbar) ** 2 / (2 * osc.mass)
    return eigenenergy(osc, n) * unit


# -- harmonic recurrence ------------------------------------------------------------


def harmonic_recurrence(n: float, v0: float, v0prime: float, kmax: int) -> LaurentSeries:
    """Coefficients ``V_0..V_kmax`` of ``V(s) = sum V_k s**-(k+1)``.

    ``V_{k+2} = -2 (n - k) V_k`` with ``V_0 = v0`` and ``V_1 = v0'``.  Floats
    overflow past ``kmax`` of a few hundred for non-terminating seeds.
    """
    if kmax < 2:
        raise ValueError("kmax must be at least 2")
    vk = [float(v0), float(v0prime)]
    for k in range(kmax - 1):
        vk.append(-2.0 * (n - k) * vk[k])
    return LaurentSeries.from_inverse_powers(vk)


def recurrence_terminates(series: LaurentSeries) -> bool:
    """True when both parity chains of a recurrence series end in zeros."""
    vk = series.inverse_power_coefficients()
    return vk[-1] == 0.0 and vk[-2] == 0.0


# -- ODEs -----------------------------------------------------------------------------


@dataclass(frozen=True)
class SOdeSpec:
    """``c2 V'' + c1 V' + c0 V + v0 * inh_v0 + v0' * inh_v0prime = 0``."""

    c2: SDomainFn
    c1: SDomainFn
    c0: SDomainFn
    inh_v0: SDomainFn
    inh_v0prime: SDomainFn

    def residual_fn(self, V: SDomainFn, v0: float, v0prime: float) -> SDomainFn:
        dV = V.differentiate()
        out = self.c1 * dV + self.c0 * V + self.inh_v0 * v0 + self.inh_v0prime * v0prime
        if not self.c2.is_zero:
            out = out + self.c2 * dV.differentiate()
        return out

    def residual(self, V: SDomainFn, v0: float, v0prime: float, s: float) -> float:
        return self.residual_fn(V, v0, v0prime).evaluate(s)


def s_ode(osc: Oscillator, n: float) -> SOdeSpec:
    """Transformed ODE for energy parameter ``n`` (Poschl-Teller: ``mu = ell - n``)."""
    S = SDomainFn.power
    const = SDomainFn.constant
    zero = SDomainFn()
    if osc.kind == HARMONIC:
        return SOdeSpec(zero, S(1, 2.0), S(2) + (2 * n + 2), S(1, -1.0), const(-1.0))
    if osc.kind == MORSE:
        c = osc.c
        return SOdeSpec(
            zero,
            const(0.25) - S(2),
            const(c) + S(1, 2 * (c - n - 1)),
            const(-(2 * (c - n) - 1)),
            zero,
        )
    ell, mu = osc.ell, osc.ell - n
    return SOdeSpec(
        S(2, -1.0),
        S(1, 2 * (mu - 1)),
        S(2) + (ell + mu) * (ell + 1 - mu),
        S(1, -1.0),
        const(-1.0),
    )


def s_ode_residual(osc: Oscillator, n: float, V: SDomainFn, v0: float,
                   v0prime: float, s: float) -> float:
    """Left-hand side of the transformed ODE at real ``s``."""
    return s_ode(osc, n).residual(V, v0, v0prime, s)


def xi_ode_residual(osc: Oscillator, state: BoundState, xi: float) -> float:
    v = state.v.smooth_part
    d1 = v.derivative()
    d2 = d1.derivative()
    val, dv, ddv = v(xi), d1(xi), d2(xi)
    if osc.kind == HARMONIC:
        return ddv - 2 * xi * dv + 2 * state.energy_param * val
    if osc.kind == MORSE:
        c, n = osc.c, state.energy_param
        return xi * ddv + 2 * (c - n) * dv + (c - xi / 4) * val
    ell, mu = osc.ell, state.energy_param
    return (1 - xi**2) * ddv - 2 * (mu + 1) * xi * dv + (ell * (ell + 1) - mu * (mu + 1)) * val


# -- eigenstates ------------------------------------------------------------------------


def _state(osc: Oscillator, n: int, v: PolyExp, V: SDomainFn | None = None) -> BoundState:
    if V is None:
        V = forward_laplace(v)
    return BoundState(n, energy_parameter(osc, n), v, V, v(0.0), v.derivative()(0.0))


def eigenstate(osc: Oscillator, n: int) -> BoundState:
    """Unnormalized bound state ``n``.

    Harmonic states exist for every ``n`` (``v`` proportional to ``H_n``,
    seeded with ``v0 = 1`` for even and ``v0' = 1`` for odd ``n``).  Morse and
    Poschl-Teller stop at the first excited state.
    """
    n = _check_quantum_number(osc, n)
    if osc.kind == HARMONIC:
        seed = (1.0, 0.0) if n % 2 == 0 else (0.0, 1.0)
        V = harmonic_recurrence(n, *seed, kmax=n + 3).to_sdomain()
        return _state(osc, n, inverse_by_residues(V), V)
    if n >= 2:
        raise UnsupportedExcitation("Morse and Poschl-Teller states stop at n = 1")
    if osc.kind == MORSE:
        if n == 0:
            v = PolyExp.term(1.0, 0, 0.5)
        else:
            v = PolyExp(((2 * osc.c - 2, 0, 0.5), (-1.0, 1, 0.5)))
        return _state(osc, n, v)
    # Poschl-Teller: polynomial on [-1, 1], transformed on xi >= 0
    return _state(osc, n, PolyExp.term(1.0, n, 0.0))


def tw_transform(osc: Oscillator, n: int) -> SDomainFn:
    """``V^TW(s)``: the transform obtained by dropping ``v0`` and ``v0'``."""
    n = _check_quantum_number(osc, n)
    if n >= 2:
        raise UnsupportedExcitation("V^TW is only available for n = 0 and n = 1")
    if osc.kind == HARMONIC:
        return SDomainFn.exponential((0.0, 0.0, -0.25)) * SDomainFn.power(-1.0 - n)
    if osc.kind == MORSE:
        c = osc.c
        return SDomainFn.shifted_power(0.5, 2 * c - 1 - n) * SDomainFn.shifted_power(
            -0.5, -1.0 - n
        )
    if int(osc.ell) != osc.ell:
        raise UnsupportedInput("s^l k_l(s) has a finite closed form for integer ell only")
    return mod_sph_bessel_k_sdomain(int(osc.ell), osc.ell - n)


# -- wavefunctions -----------------------------------------------------------------------


def wavefunction(osc: Oscillator, state: BoundState, x):
    """Unnormalized ``psi(x) = prefactor(xi) * v(xi)``.

    Poschl-Teller states are evaluated from the polynomial ``v`` directly on
    ``xi in (-1, 1)``, so ``psi(-x) = (-1)**n psi(x)`` comes out automatically.
    """
    xi = np.asarray(scale_to_xi(osc, x))
    v = state.v(xi)
    if osc.kind == HARMONIC:
        pre = np.exp(-(xi**2) / 2)
    elif osc.kind == MORSE:
        pre = xi ** (osc.c - state.n - 0.5)
    else:
        pre = np.clip(1 - xi**2, 0.0, None) ** (state.energy_param / 2)
    out = pre * v
    return out if np.ndim(out) else float(out)


def normalization_constant(osc: Oscillator, state: BoundState, rel_cutoff: float = 1e-12,
                           points: int = 20001) -> float:
    """``N`` such that ``int |N psi|**2 dx = 1`` (trapezoid rule).

    The grid is widened until ``|psi|**2`` at both ends drops below
    ``rel_cutoff`` times its maximum.
    """
    lo, hi = -1.0, 1.0
    for _ in range(60):
        x = np.linspace(lo, hi, points)
        dens = wavefunction(osc, state, x) ** 2
        peak = dens.max()
        grow_lo = dens[0] > rel_cutoff * peak
        grow_hi = dens[-1] > rel_cutoff * peak
        if not (grow_lo or grow_hi):
            break
        lo, hi = (2 * lo if grow_lo else lo), (2 * hi if grow_hi else hi)
    return 1.0 / math.sqrt(np.trapezoid(dens, x))
