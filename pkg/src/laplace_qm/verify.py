"""Self-check suite behind ``laplace-qm verify``.

Each check returns a :class:`CheckResult`; :func:`run_checks` runs a selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .oscillators import (
    POSCHL_TELLER,
    Oscillator,
    eigenstate,
    harmonic_recurrence,
    recurrence_terminates,
    s_ode_residual,
    tw_transform,
    xi_ode_residual,
)
from .pathology import tw_deviation_moment, tw_deviation_moment_from_series
from .sdomain import SDomainFn, laurent_expand
from .specfun import hermite
from .transforms import (
    PolyExp,
    bromwich_invert,
    forward_laplace,
    inverse_by_residues,
    moments,
    series_from_moments,
)

RESIDUAL_TOL = 1e-10
TW_HOMOGENEOUS_TOL = 1e-8
TW_INHOMOGENEOUS_MIN = 0.1


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "details": self.details}


@dataclass
class VerifyConfig:
    c: float = 3.0
    ell: float = 2.0
    oscillator: str | None = None
    n: int | None = None
    perturb_v0: float = 0.0


def sample_points(osc: Oscillator, count: int = 20) -> np.ndarray:
    """Real sample points right of every pole and branch point (s > 1/2)."""
    return np.linspace(0.6, 4.0, count)


def reference_states(c: float, ell: float):
    """``(oscillator, n, v, V, (v0, v0'))`` for the six reference states."""
    h, m, pt = Oscillator.harmonic(), Oscillator.morse(c), Oscillator.poschl_teller(ell)
    S = SDomainFn.power
    P = SDomainFn.shifted_power
    return [
        (h, 0, PolyExp.term(1.0), S(-1), (1.0, 0.0)),
        (h, 1, PolyExp.term(1.0, 1), S(-2), (0.0, 1.0)),
        (m, 0, PolyExp.term(1.0, 0, 0.5), P(-0.5, -1), (1.0, -0.5)),
        (m, 1, PolyExp(((2 * c - 2, 0, 0.5), (-1.0, 1, 0.5))),
         P(-0.5, -1, 2 * c - 2) - P(-0.5, -2), (2 * c - 2, -c)),
        (pt, 0, PolyExp.term(1.0), S(-1), (1.0, 0.0)),
        (pt, 1, PolyExp.term(1.0, 1), S(-2), (0.0, 1.0)),
    ]


def _rows(cfg: VerifyConfig):
    for row in reference_states(cfg.c, cfg.ell):
        osc, n = row[0], row[1]
        if cfg.oscillator and osc.kind != cfg.oscillator:
            continue
        if cfg.n is not None and n != cfg.n:
            continue
        yield row


def _label(osc: Oscillator, n: int) -> str:
    return f"{osc.kind}[n={n}]"


def check_reference(cfg: VerifyConfig) -> CheckResult:
    details, ok = {}, True
    for osc, n, v, V, pair in _rows(cfg):
        st = eigenstate(osc, n)
        good = (
            st.v.allclose(v)
            and forward_laplace(st.v).allclose(V)
            and abs(st.v0 - pair[0]) <= 1e-12
            and abs(st.v0prime - pair[1]) <= 1e-12
        )
        details[_label(osc, n)] = bool(good)
        ok &= good
    return CheckResult("reference", ok, details)


def check_s_residual(cfg: VerifyConfig) -> CheckResult:
    details, ok = {}, True
    for osc, n, *_ in _rows(cfg):
        st = eigenstate(osc, n)
        worst = max(
            abs(s_ode_residual(osc, n, st.V, st.v0 + cfg.perturb_v0, st.v0prime, s))
            for s in sample_points(osc)
        )
        details[_label(osc, n)] = worst
        ok &= worst <= RESIDUAL_TOL
    return CheckResult("s-residual", ok, details)


def check_xi_residual(cfg: VerifyConfig) -> CheckResult:
    details, ok = {}, True
    for osc, n, *_ in _rows(cfg):
        st = eigenstate(osc, n)
        grid = np.linspace(-0.95, 0.95, 20) if osc.kind == POSCHL_TELLER else np.linspace(0.05, 8, 20)
        worst = max(abs(xi_ode_residual(osc, st, x)) for x in grid)
        details[_label(osc, n)] = worst
        ok &= worst <= RESIDUAL_TOL
    return CheckResult("xi-residual", ok, details)


def check_tw_residual(cfg: VerifyConfig) -> CheckResult:
    """V^TW solves the transformed ODE with (0, 0) but not with the true (v0, v0')."""
    details, ok = {}, True
    for osc, n, *_ in _rows(cfg):
        st = eigenstate(osc, n)
        tw = tw_transform(osc, n)
        pts = sample_points(osc)
        hom = max(abs(s_ode_residual(osc, n, tw, 0.0, 0.0, s)) for s in pts)
        inh = min(abs(s_ode_residual(osc, n, tw, st.v0, st.v0prime, s)) for s in pts)
        hom_pass = hom <= TW_HOMOGENEOUS_TOL
        inh_fail = inh >= TW_INHOMOGENEOUS_MIN
        details[_label(osc, n)] = {
            "homogeneous_max_residual": hom,
            "homogeneous_pass": hom_pass,
            "true_boundary_min_residual": inh,
            "true_boundary_fail": inh_fail,
        }
        ok &= hom_pass and inh_fail
    return CheckResult("tw-residual", ok, details)


def check_round_trip(cfg: VerifyConfig, count: int = 100, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(count):
        terms = tuple(
            (rng.normal(), int(rng.integers(0, 4)), float(rng.choice([0.5, 1.0, 1.5, 2.5])))
            for _ in range(int(rng.integers(1, 5)))
        )
        f = PolyExp(terms)
        if not inverse_by_residues(forward_laplace(f)).allclose(f, 1e-10):
            failures += 1
    return CheckResult("round-trip", failures == 0, {"cases": count, "failures": failures})


def check_moments(cfg: VerifyConfig) -> CheckResult:
    details, ok = {}, True
    for c in (2.1, 3.0, 5.0):
        v = PolyExp(((2 * c - 2, 0, 0.5), (-1.0, 1, 0.5)))
        mv = moments(v, 10)
        err = max(
            abs(mv[p] - 2 ** (p + 2) * math.factorial(p) * (c - 2 - p))
            / max(1.0, abs(2 ** (p + 2) * math.factorial(p) * (c - 2 - p)))
            for p in range(11)
        )
        series = series_from_moments(moments(v, 8))
        closed = SDomainFn.shifted_power(-0.5, -1, 2 * c - 2) - SDomainFn.shifted_power(-0.5, -2)
        taylor = laurent_expand(closed, 9)
        terr = max(
            abs(series[p] - taylor[p]) / max(1.0, abs(taylor[p])) for p in range(9)
        )
        details[f"c={c:g}"] = {"moment_rel_err": err, "series_rel_err": terr}
        ok &= err <= 1e-10 and terr <= 1e-9
    return CheckResult("moments", ok, details)


def check_tw_moments(cfg: VerifyConfig) -> CheckResult:
    mismatches = [
        p for p in range(16) if tw_deviation_moment(p) != tw_deviation_moment_from_series(p, p)
    ]
    return CheckResult("tw-moments", not mismatches, {"mismatched_orders": mismatches})


def check_recurrence(cfg: VerifyConfig) -> CheckResult:
    spreads = {}
    for n in range(11):
        seed = (1.0, 0.0) if n % 2 == 0 else (0.0, 1.0)
        series = harmonic_recurrence(n, *seed, kmax=n + 3)
        v = inverse_by_residues(series.to_sdomain())
        coeffs = np.zeros(n + 1)
        for c, p, _ in v.smooth:
            coeffs[p] = c
        h = hermite(n).coef
        mask = h != 0
        ratios = coeffs[mask] / h[mask]
        spread = float(np.ptp(ratios) / abs(ratios.mean()))
        ok_zero = np.all(coeffs[~mask] == 0) and recurrence_terminates(series)
        spreads[str(n)] = spread if ok_zero else None
    vk = harmonic_recurrence(0.5, 1.0, 0.0, 202).inverse_power_coefficients()
    ratio_err = abs(vk[202] / vk[200] - 400) / 400
    ok = (None not in spreads.values() and max(spreads.values()) <= 1e-9
          and ratio_err <= 0.05)
    return CheckResult("recurrence", ok, {"hermite_ratio_spread": spreads,
                                          "divergence_ratio_rel_err": ratio_err})


def check_delta(cfg: VerifyConfig) -> CheckResult:
    f = inverse_by_residues(SDomainFn.constant(1.0))
    ok = f.smooth == () and f.delta == ((1.0, 0),)
    return CheckResult("delta", ok, {"inverse_of_one": str(f)})


def check_bromwich(cfg: VerifyConfig) -> CheckResult:
    cases = [
        ("1/s", SDomainFn.power(-1), 0.05, lambda x: 1.0),
        ("1/(s+1/2)", SDomainFn.shifted_power(-0.5, -1), -0.45, lambda x: math.exp(-x / 2)),
    ]
    details, ok = {}, True
    for name, F, a, exact in cases:
        for xi in (0.5, 1.0, 2.0):
            err = abs(bromwich_invert(F, xi, a, 400.0).value - exact(xi))
            details[f"{name}@xi={xi:g}"] = err
            ok &= err <= 1e-3
    return CheckResult("bromwich", ok, details)


CHECKS = {
    "reference": check_reference,
    "s-residual": check_s_residual,
    "xi-residual": check_xi_residual,
    "tw-residual": check_tw_residual,
    "round-trip": check_round_trip,
    "moments": check_moments,
    "tw-moments": check_tw_moments,
    "recurrence": check_recurrence,
    "delta": check_delta,
    "bromwich": check_bromwich,
}


def run_checks(names=None, cfg: VerifyConfig | None = None) -> list[CheckResult]:
    cfg = cfg or VerifyConfig()
    return [CHECKS[name](cfg) for name in (names or CHECKS)]
