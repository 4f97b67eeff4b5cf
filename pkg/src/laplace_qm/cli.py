"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 bad input (or point budget
exceeded), 3 empty result set.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    BudgetExceeded,
    InvalidQuantumNumber,
    LaplaceQMError,
    NoBoundStates,
    UnsupportedExcitation,
)
from .oscillators import (
    HARMONIC,
    MORSE,
    POSCHL_TELLER,
    Oscillator,
    eigenenergy,
    eigenstate,
    energy_parameter,
    normalization_constant,
    quantize,
    wavefunction,
)
from .pathology import GAMMA_RANGE, profile
from .svgplot import line_plot
from .verify import CHECKS, VerifyConfig, run_checks

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_EMPTY = 0, 1, 2, 3
DIMENSIONLESS = "dimensionless"

_KIND_ALIASES = {
    "harmonic": HARMONIC,
    "morse": MORSE,
    "poschl-teller": POSCHL_TELLER,
    "poschl_teller": POSCHL_TELLER,
    "pt": POSCHL_TELLER,
}

_SDOMAIN_SCHEMA = {
    "type": "object",
    "required": ["expression", "terms", "unit"],
    "properties": {
        "expression": {"type": "string"},
        "unit": {"type": "string"},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff", "factors", "exp_poly"],
                "properties": {
                    "coeff": {"type": "number"},
                    "factors": {"type": "array", "items": {
                        "type": "array", "items": {"type": "number"},
                        "minItems": 2, "maxItems": 2}},
                    "exp_poly": {"type": "array", "items": {"type": "number"}},
                },
            },
        },
    },
}

SOLVE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["oscillator", "energy_unit", "states"],
    "properties": {
        "oscillator": {
            "type": "object",
            "required": ["kind", "c", "ell"],
            "properties": {
                "kind": {"enum": list(_KIND_ALIASES.values())},
                "c": {"type": ["number", "null"]},
                "c_unit": {"const": DIMENSIONLESS},
                "ell": {"type": ["number", "null"]},
                "ell_unit": {"const": DIMENSIONLESS},
            },
        },
        "energy_unit": {"type": "string"},
        "states": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "energy", "energy_unit", "energy_parameter",
                             "energy_parameter_unit", "available"],
                "properties": {
                    "n": {"type": "integer", "minimum": 0},
                    "energy": {"type": "number"},
                    "energy_unit": {"type": "string"},
                    "energy_parameter": {"type": "number"},
                    "energy_parameter_unit": {"const": DIMENSIONLESS},
                    "available": {"type": "boolean"},
                    "reason": {"type": "string"},
                    "v": {
                        "type": "object",
                        "required": ["expression", "smooth", "delta", "unit"],
                    },
                    "V": _SDOMAIN_SCHEMA,
                    "v0": {"type": "number"},
                    "v0_unit": {"const": DIMENSIONLESS},
                    "v0prime": {"type": "number"},
                    "v0prime_unit": {"const": DIMENSIONLESS},
                },
            },
        },
    },
}

VERIFY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["passed", "checks"],
    "properties": {
        "passed": {"type": "boolean"},
        "failed": {"type": "array", "items": {"type": "string"}},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "passed", "details"],
                "properties": {
                    "name": {"enum": list(CHECKS)},
                    "passed": {"type": "boolean"},
                    "details": {"type": "object"},
                },
            },
        },
    },
}

PATHOLOGY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["profiles"],
    "properties": {
        "profiles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["gamma", "gamma_unit", "plateau_estimate", "plateau_unit",
                             "wavelength_estimate", "wavelength_unit",
                             "wavelength_times_gamma_over_2pi",
                             "wavelength_times_gamma_over_2pi_unit", "points", "csv"],
            },
        },
    },
}


class InputError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _jsonable(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def _write_json(obj, path: str | None):
    text = json.dumps(obj, indent=2, default=_jsonable, allow_nan=False) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _oscillator_from_args(args) -> Oscillator:
    kind = _KIND_ALIASES.get(args.oscillator.lower())
    if kind is None:
        raise InputError(f"unknown oscillator {args.oscillator!r}")
    if kind == MORSE:
        if args.c is None:
            raise InputError("Morse requires --c")
        if args.c <= 0:
            raise InputError("Morse requires c > 0")
        return Oscillator.morse(args.c)
    if kind == POSCHL_TELLER:
        if args.ell is None:
            raise InputError("Poschl-Teller requires --ell")
        if args.ell <= 0:
            raise InputError("Poschl-Teller requires ell > 0")
        return Oscillator.poschl_teller(args.ell)
    return Oscillator.harmonic()


# -- solve -----------------------------------------------------------------------------


def _state_record(osc: Oscillator, n: int) -> dict:
    rec = {
        "n": n,
        "energy": eigenenergy(osc, n),
        "energy_unit": osc.energy_unit,
        "energy_parameter": energy_parameter(osc, n),
        "energy_parameter_unit": DIMENSIONLESS,
    }
    try:
        st = eigenstate(osc, n)
    except UnsupportedExcitation as exc:
        rec.update(available=False, reason=str(exc))
        return rec
    rec.update(
        available=True,
        v={"expression": str(st.v), **st.v.to_dict(), "unit": DIMENSIONLESS},
        V={"expression": str(st.V), "terms": st.V.to_dict(), "unit": DIMENSIONLESS},
        v0=float(st.v0),
        v0_unit=DIMENSIONLESS,
        v0prime=float(st.v0prime),
        v0prime_unit=DIMENSIONLESS,
    )
    return rec


def cmd_solve(args) -> int:
    osc = _oscillator_from_args(args)
    if args.n is not None:
        ns = [args.n]
        eigenenergy(osc, args.n)  # validates
    else:
        ns = list(quantize(osc, args.n_max if osc.kind == HARMONIC else None))
    report = {
        "oscillator": {"kind": osc.kind, "c": osc.c, "c_unit": DIMENSIONLESS,
                       "ell": osc.ell, "ell_unit": DIMENSIONLESS},
        "energy_unit": osc.energy_unit,
        "states": [_state_record(osc, n) for n in ns],
    }
    _write_json(report, args.output)
    if args.psi_csv:
        _write_psi_csv(osc, ns, args)
    return EXIT_OK


def _write_psi_csv(osc: Oscillator, ns, args):
    x = np.linspace(args.x_min, args.x_max, args.points)
    cols, names = [], []
    for n in ns:
        try:
            st = eigenstate(osc, n)
        except UnsupportedExcitation:
            continue
        psi = np.asarray(wavefunction(osc, st, x), dtype=float)
        if args.normalize:
            psi = psi * normalization_constant(osc, st)
        cols.append(psi)
        names.append(f"psi_{n}")
    with open(args.psi_csv, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x"] + names)
        for i, xv in enumerate(x):
            w.writerow([_fmt(xv)] + [_fmt(c[i]) for c in cols])


# -- verify ----------------------------------------------------------------------------


def cmd_verify(args) -> int:
    names = args.check or list(CHECKS)
    for name in names:
        if name not in CHECKS:
            raise InputError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
    kind = None
    if args.oscillator:
        kind = _KIND_ALIASES.get(args.oscillator.lower())
        if kind is None:
            raise InputError(f"unknown oscillator {args.oscillator!r}")
    if args.c <= 1.5:
        raise InputError("verify needs c > 3/2 so that the Morse n = 1 state exists")
    if args.ell <= 1 or int(args.ell) != args.ell:
        raise InputError("verify needs an integer ell >= 2 (closed-form k_ell and n = 1)")
    cfg = VerifyConfig(c=args.c, ell=args.ell, oscillator=kind, n=args.n,
                       perturb_v0=args.perturb_v0)
    results = run_checks(names, cfg)
    failed = [r.name for r in results if not r.passed]
    report = {"passed": not failed, "failed": failed,
              "checks": [r.to_dict() for r in results]}
    _write_json(report, args.output)
    for name in failed:
        print(f"FAILED: {name}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# -- pathology / figure ------------------------------------------------------------------


def _parse_gammas(text: str) -> list[float]:
    try:
        gammas = [float(g) for g in text.split(",") if g.strip()]
    except ValueError:
        raise InputError(f"cannot parse gamma list {text!r}") from None
    lo, hi = GAMMA_RANGE
    for g in gammas:
        if not lo <= g <= hi:
            raise InputError(f"gamma must lie in [{lo:g}, {hi:g}], got {g:g}")
    if not gammas:
        raise InputError("empty gamma list")
    return gammas


def _fig_a_limit(gamma: float) -> float:
    # first five oscillations, xi/gamma units
    return 5 * 2 * math.pi / gamma**2


def _fig_b_limit(gamma: float, override: float | None) -> float:
    return override if override is not None else min(2.0, 100.0 / gamma)


def _profiles(gammas, fig, xmax_override, spw, workers):
    out = []
    for g in gammas:
        limit = _fig_a_limit(g)
        if fig in ("b", "both"):
            limit = max(limit, _fig_b_limit(g, xmax_override))
        elif xmax_override is not None:
            limit = xmax_override
        out.append(profile(g, limit, spw, workers=workers))
    return out


def _svgs(profiles, fig, out_dir: Path, stem: str) -> list[Path]:
    paths = []
    if fig in ("a", "both"):
        series = []
        for p in profiles:
            m = p.gamma * p.xi_grid / (2 * math.pi) <= 5.0
            series.append((f"gamma = {p.gamma:g}", p.gamma_xi_over_2pi[m], p.rescaled_values[m]))
        path = out_dir / f"{stem}_a.svg"
        path.write_text(line_plot(series, "gamma xi / 2pi", "gamma^2 exp(-gamma^2/4) v_gamma",
                                  "rescaled truncated inverse"), encoding="utf-8")
        paths.append(path)
    if fig in ("b", "both"):
        series = [(f"gamma = {p.gamma:g}", p.xi_over_gamma, np.abs(p.rescaled_values))
                  for p in profiles]
        path = out_dir / f"{stem}_b.svg"
        path.write_text(line_plot(series, "xi / gamma", "|gamma^2 exp(-gamma^2/4) v_gamma|",
                                  "envelope decay"), encoding="utf-8")
        paths.append(path)
    return paths


def cmd_pathology(args) -> int:
    gammas = _parse_gammas(args.gamma)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    profiles = _profiles(gammas, args.fig, args.xi_over_gamma_max,
                         args.samples_per_wavelength, args.workers)
    summary = []
    for p in profiles:
        path = out_dir / f"pathology_gamma_{p.gamma:g}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["xi", "gamma_xi_over_2pi", "xi_over_gamma", "g", "abs_g"])
            for xi, a, b, g in zip(p.xi_grid, p.gamma_xi_over_2pi, p.xi_over_gamma,
                                   p.rescaled_values):
                w.writerow([_fmt(xi), _fmt(a), _fmt(b), _fmt(g), _fmt(abs(g))])
        ratio = p.wavelength_estimate * p.gamma / (2 * math.pi)
        print(f"gamma={p.gamma:g} plateau={p.plateau_estimate:.6f} "
              f"wavelength*gamma/2pi={ratio:.6f}")
        summary.append({
            "gamma": p.gamma, "gamma_unit": DIMENSIONLESS,
            "plateau_estimate": p.plateau_estimate, "plateau_unit": DIMENSIONLESS,
            "wavelength_estimate": p.wavelength_estimate, "wavelength_unit": "xi",
            "wavelength_times_gamma_over_2pi": ratio,
            "wavelength_times_gamma_over_2pi_unit": DIMENSIONLESS,
            "points": int(len(p.xi_grid)), "csv": path.name,
        })
    _svgs(profiles, args.fig, out_dir, "pathology_fig")
    _write_json({"profiles": summary}, str(out_dir / "pathology_summary.json"))
    return EXIT_OK


def cmd_figure(args) -> int:
    gammas = _parse_gammas(args.gamma)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    profiles = _profiles(gammas, args.panel, None, args.samples_per_wavelength, args.workers)
    for path in _svgs(profiles, args.panel, out_dir, "fig1"):
        print(path)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laplace-qm",
        description="Laplace-transform solutions of 1-D oscillators and the "
                    "pathology of dropping boundary terms.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="bound states, energies and transforms")
    p.add_argument("--oscillator", required=True,
                   help="harmonic, morse or poschl-teller")
    p.add_argument("--c", type=float, help="Morse strength parameter")
    p.add_argument("--ell", type=float, help="Poschl-Teller depth parameter")
    p.add_argument("--n", type=int, help="single quantum number")
    p.add_argument("--n-max", type=int, default=3,
                   help="highest harmonic state listed when --n is absent")
    p.add_argument("--output", help="JSON output path (default stdout)")
    p.add_argument("--psi-csv", help="write psi(x) for the listed states to this CSV")
    p.add_argument("--x-min", type=float, default=-5.0)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--normalize", action="store_true", help="L2-normalize psi in the CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run the self-check suite")
    p.add_argument("--check", action="append", help=f"one of: {', '.join(CHECKS)}")
    p.add_argument("--oscillator", help="restrict state-based checks to one oscillator")
    p.add_argument("--n", type=int, help="restrict state-based checks to one n")
    p.add_argument("--c", type=float, default=3.0)
    p.add_argument("--ell", type=float, default=2.0)
    p.add_argument("--perturb-v0", type=float, default=0.0,
                   help="add this offset to v0 in the s-residual check (fault injection)")
    p.add_argument("--output", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("pathology", cmd_pathology, "CSV/SVG/JSON of the rescaled truncated inverse"),
        ("figure", cmd_figure, "SVG panels of the rescaled truncated inverse"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--gamma", default="50,100,200", help="comma-separated gamma list")
        if name == "pathology":
            p.add_argument("--fig", choices=("a", "b", "both"), default="both")
            p.add_argument("--xi-over-gamma-max", type=float,
                           help="sampling range in xi/gamma (default: 100/gamma, max 2)")
        else:
            p.add_argument("--panel", choices=("a", "b", "both"), default="both")
        p.add_argument("--samples-per-wavelength", type=int, default=16)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out-dir", default=".")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoBoundStates as exc:
        print(f"error: no bound states: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (InputError, InvalidQuantumNumber, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LaplaceQMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
