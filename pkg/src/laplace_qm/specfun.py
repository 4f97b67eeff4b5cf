"""Hermite polynomials, double factorials and modified spherical Bessel k_l."""

from __future__ import annotations

import math

from numpy.polynomial import Polynomial

from .errors import DomainError
from .sdomain import GeneralTerm, SDomainFn


def hermite(n: int) -> Polynomial:
    """Physicists' Hermite polynomial ``H_n`` (ascending coefficients).

    Built from ``H_{k+1} = 2 xi H_k - 2 k H_{k-1}`` with ``H_0 = 1``,
    ``H_1 = 2 xi``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev, cur = Polynomial([1.0]), Polynomial([0.0, 2.0])
    if n == 0:
        return prev
    xi = Polynomial([0.0, 1.0])
    for k in range(1, n):
        prev, cur = cur, 2 * xi * cur - 2 * k * prev
    return cur


def double_factorial(p: int) -> int:
    if p < 0:
        raise ValueError("p must be nonnegative")
    out = 1
    for k in range(p, 1, -2):
        out *= k
    return out


def _kl_coefficients(l: int) -> list[float]:
    # k_l(s) = exp(-s)/s * sum_j c_j s**-j
    return [
        math.factorial(l + j) / (math.factorial(j) * math.factorial(l - j) * 2**j)
        for j in range(l + 1)
    ]


def mod_sph_bessel_k(l: int, s: float) -> float:
    """Modified spherical Bessel function of the second kind.

    Normalized so that ``k_0(s) = exp(-s)/s`` (no ``pi/2`` prefactor).
    """
    if s <= 0:
        raise DomainError("k_l(s) is defined here for s > 0 only")
    if l < 0 or int(l) != l:
        raise DomainError("k_l needs a nonnegative integer order")
    l = int(l)
    return math.exp(-s) / s * sum(c * s**-j for j, c in enumerate(_kl_coefficients(l)))


def mod_sph_bessel_k_sdomain(l: int, extra_power: float = 0.0) -> SDomainFn:
    """``s**extra_power * k_l(s)`` as an :class:`SDomainFn`."""
    if l < 0 or int(l) != l:
        raise DomainError("k_l needs a nonnegative integer order")
    return SDomainFn(
        tuple(
            GeneralTerm(c, ((0.0, extra_power - 1.0 - j),), (0.0, -1.0))
            for j, c in enumerate(_kl_coefficients(int(l)))
        )
    )
