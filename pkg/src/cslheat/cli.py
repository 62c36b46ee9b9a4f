"""Command-line front end.

Subcommands ``lambda-eff``, ``rate``, ``scan`` and ``oracle``. All inputs are
SI: frequencies in rad/s, wave numbers in rad/m, lengths in m, masses in kg.
Spectra and dispersions are given as ``family:p1,p2`` or ``csv:path``.

Exit codes: 0 success, 2 usage/validation, 3 quadrature did not converge,
4 oracle check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import CheckFailure, ConvergenceError, CSLHeatError
from .heating import (
    HBAR,
    PROTON_MASS,
    NoiseParams,
    PhysicalConstants,
    QuadratureOptions,
    TargetBody,
    heating_rate,
    heating_rate_per_mass,
    isotropic,
    lambda_eff,
    lambda_eff_mc,
    scan,
)
from .lattice import DiatomicCell, MonatomicLattice, appendix_checks, bz_sum_lambda_eff
from .spectra import (
    DebyeCapped,
    ExpCutoff,
    HardCutoff,
    Linear,
    Lorentzian,
    SineBand,
    White,
    read_tabulated_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_ORACLE = 0, 2, 3, 4
ORACLE_MAX_DEVIATION = 1e-2
ORACLE_MAX_RESIDUAL = 1e-10

SPECTRUM_FAMILIES = {
    "white": (White, 1),
    "hardcutoff": (HardCutoff, 2),
    "expcutoff": (ExpCutoff, 2),
    "lorentzian": (Lorentzian, 2),
}
DISPERSION_FAMILIES = {
    "linear": (Linear, 1),
    "debye": (DebyeCapped, 2),
    "debyecapped": (DebyeCapped, 2),
    "sineband": (SineBand, 2),
}


class UsageError(Exception):
    pass


def _parse_model(text, families, kind):
    family, sep, rest = text.partition(":")
    family = family.strip().lower()
    if not sep:
        raise UsageError(f"{kind} must look like family:p1[,p2] or csv:path, got {text!r}")
    if family == "csv":
        return read_tabulated_csv(rest, kind)
    if family not in families:
        raise UsageError(f"unknown {kind} family {family!r}; choose from {sorted(families)} or csv")
    cls, nparams = families[family]
    try:
        params = [float(p) for p in rest.split(",")]
    except ValueError:
        raise UsageError(f"bad {kind} parameters {rest!r}") from None
    if len(params) != nparams:
        raise UsageError(f"{family} takes {nparams} parameter(s), got {len(params)}")
    return cls(*params)


def parse_spectrum(text):
    return _parse_model(text, SPECTRUM_FAMILIES, "spectrum")


def parse_dispersion(text):
    return _parse_model(text, DISPERSION_FAMILIES, "dispersion")


def _q(value, unit):
    return {"value": value, "unit": unit}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--output", choices=("json", "csv"), default="json")
    g.add_argument("--rel-tol", type=float, default=1e-9, help="quadrature relative tolerance")
    g.add_argument("--abs-tol", type=float, default=0.0, help="quadrature absolute tolerance, 1/s")
    g.add_argument("--max-subdivisions", type=int, default=200)
    g.add_argument("--w-max", type=float, default=8.0, help="radial truncation of w = r_c q")
    g.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    g.add_argument("--hbar", type=float, default=HBAR, help="reduced Planck constant, J s")
    g.add_argument("--m-n", type=float, default=PROTON_MASS, help="nucleon mass, kg")

    model = argparse.ArgumentParser(add_help=False)
    m = model.add_argument_group("model")
    m.add_argument("--spectrum", required=True,
                   help="white:L0 | hardcutoff:L0,Wc | expcutoff:L0,Wc | lorentzian:L0,Wc | csv:path "
                        "(L0 in 1/s, Wc in rad/s)")
    m.add_argument("--dispersion", required=True,
                   help="linear:c_s | debye:c_s,W_D | sineband:W_max,q_edge | csv:path "
                        "(c_s in m/s, W in rad/s, q in rad/m)")
    m.add_argument("--rc", type=float, required=True, help="noise correlation length r_c, m")

    parser = _Parser(prog="cslheat", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"cslheat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("lambda-eff", parents=[common, model], help="effective reduction rate")
    p.add_argument("--method", choices=("quad", "mc"), default="quad")
    p.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo samples")

    p = sub.add_parser("rate", parents=[common, model], help="heating power")
    p.add_argument("--mass", type=float, default=None, help="total mass M, kg (omit for per-mass)")

    p = sub.add_parser("scan", parents=[common, model], help="1D parameter scan, CSV")
    p.add_argument("--param", choices=("omega_c", "r_c", "c_s"), required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log", action="store_true", help="geometric spacing")
    p.add_argument("--hold-wc", action="store_true",
                   help="for r_c scans, co-vary omega_c to keep omega_c * r_c fixed")

    p = sub.add_parser("oracle", parents=[common, model], help="finite-lattice and diatomic checks")
    p.add_argument("--lattice", type=int, default=32, help="cells per side L (even, >= 4)")
    p.add_argument("--ratio", type=float, default=6.0, help="pi r_c / a")
    p.add_argument("--atomic-mass", type=float, default=4.6637e-26, help="m_A, kg")
    p.add_argument("--masses", default="1,2", help="diatomic masses m1,m2")
    p.add_argument("--spring", type=float, default=1.0, help="diatomic spring constant, N/m")
    return parser


# ---------------------------------------------------------------------------
# envelope


def _setup(args):
    consts = PhysicalConstants(args.hbar, args.m_n)
    opts = QuadratureOptions(args.rel_tol, args.abs_tol, args.max_subdivisions, args.w_max)
    spectrum = parse_spectrum(args.spectrum)
    dispersion = parse_dispersion(args.dispersion)
    NoiseParams(args.rc, spectrum)
    return consts, opts, spectrum, dispersion


def _header(args, consts, opts):
    default = consts.hbar == HBAR and consts.m_N == PROTON_MASS
    return {
        "tool": "cslheat",
        "version": __version__,
        "command": args.command,
        "inputs": {
            "spectrum": args.spectrum,
            "dispersion": args.dispersion,
            "r_c": _q(args.rc, "m"),
        },
        "constants": {
            "hbar": _q(consts.hbar, "J s"),
            "m_N": _q(consts.m_N, "kg"),
            "source": "CODATA 2018, proton mass" if default else "user override",
        },
        "options": {
            "rel_tol": opts.rel_tol,
            "abs_tol": _q(opts.abs_tol, "1/s"),
            "max_subdivisions": opts.max_subdivisions,
            "w_max": opts.w_max,
        },
    }


def _compute(args, consts, opts, spectrum, dispersion, method="quad"):
    """Run lambda_eff and return (result fields, converged)."""
    converged = True
    if method == "mc":
        res = lambda_eff_mc(spectrum, isotropic(dispersion), args.rc, args.samples, args.seed)
    else:
        try:
            res = lambda_eff(spectrum, dispersion, args.rc, opts)
        except ConvergenceError as exc:
            res, converged = exc.result, False
    out = {
        "lambda_eff": _q(res.value, "1/s"),
        "lambda_eff_error": _q(res.error_estimate, "1/s"),
        "evaluations": res.evaluations,
        "method": res.method,
    }
    if spectrum.amplitude > 0:
        out["suppression"] = _q(res.value / spectrum.amplitude, "1")
    return out, res.value, converged


def _emit(envelope, fmt, stream):
    if fmt == "json":
        stream.write(json.dumps(envelope, indent=2) + "\n")
        return
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["quantity", "value", "unit"])

    def walk(prefix, obj):
        if isinstance(obj, dict) and set(obj) == {"value", "unit"}:
            w.writerow([prefix, repr(obj["value"]), obj["unit"]])
        elif isinstance(obj, dict):
            for key, val in obj.items():
                walk(f"{prefix}.{key}" if prefix else key, val)
        elif isinstance(obj, list):
            for i, val in enumerate(obj):
                walk(f"{prefix}.{i}", val)
        else:
            w.writerow([prefix, repr(obj) if isinstance(obj, float) else obj, ""])

    walk("", envelope)


# ---------------------------------------------------------------------------
# subcommands


def cmd_lambda_eff(args, out) -> int:
    consts, opts, spectrum, dispersion = _setup(args)
    env = _header(args, consts, opts)
    env["options"]["method"] = args.method
    if args.method == "mc":
        env["options"]["seed"] = args.seed
        env["options"]["samples"] = args.samples
    results, _, converged = _compute(args, consts, opts, spectrum, dispersion, args.method)
    env["results"] = results
    env["status"] = "ok" if converged else "not-converged"
    _emit(env, args.output, out)
    return EXIT_OK if converged else EXIT_CONVERGENCE


def cmd_rate(args, out) -> int:
    consts, opts, spectrum, dispersion = _setup(args)
    body = TargetBody(args.mass)
    env = _header(args, consts, opts)
    env["inputs"]["mass"] = None if args.mass is None else _q(args.mass, "kg")
    results, lam, converged = _compute(args, consts, opts, spectrum, dispersion)
    results["rate_per_mass"] = _q(heating_rate_per_mass(lam, consts, args.rc), "W/kg")
    if args.mass is not None:
        results["rate"] = _q(heating_rate(lam, body, consts, args.rc), "W")
    env["results"] = results
    env["status"] = "ok" if converged else "not-converged"
    _emit(env, args.output, out)
    return EXIT_OK if converged else EXIT_CONVERGENCE


SCAN_HEADER = ["param", "value", "lambda_eff", "error", "rate_per_mass_W_per_kg", "suppression"]


def cmd_scan(args, out, err) -> int:
    consts, opts, spectrum, dispersion = _setup(args)
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    if args.log:
        if args.start <= 0 or args.stop <= 0:
            raise UsageError("--log needs positive --from and --to")
        grid = np.geomspace(args.start, args.stop, args.points)
    else:
        grid = np.linspace(args.start, args.stop, args.points)
    rows = scan(args.param, grid, NoiseParams(args.rc, spectrum), dispersion, opts, consts,
                hold_wc=args.hold_wc)
    failed = sum(not r.ok for r in rows)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    for r in rows:
        w.writerow([args.param] + [repr(float(x)) for x in
                                   (r.value, r.lambda_eff, r.error, r.rate_per_mass, r.suppression)])
    out.write(f"# failed_rows={failed}\n")
    if failed:
        err.write(f"warning: {failed} scan row(s) failed\n")
    return EXIT_OK


def cmd_oracle(args, out, err) -> int:
    consts, opts, spectrum, dispersion = _setup(args)
    try:
        m1, m2 = (float(x) for x in args.masses.split(","))
    except ValueError:
        raise UsageError(f"--masses must be m1,m2, got {args.masses!r}") from None
    a = math.pi * args.rc / args.ratio
    lat = MonatomicLattice(a, args.lattice, args.atomic_mass, dispersion)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # echoed below from disc.warnings
        disc = bz_sum_lambda_eff(lat, spectrum, args.rc, consts)
    for note in disc.warnings:
        err.write(f"warning: {note}\n")
    results, cont, converged = _compute(args, consts, opts, spectrum, dispersion)
    deviation = abs(disc.value - cont) / cont if cont else abs(disc.value)
    cell = DiatomicCell(m1, m2, args.spring)
    try:
        rep = appendix_checks(cell, tol=ORACLE_MAX_RESIDUAL)
        residuals = rep.residuals
    except CheckFailure as exc:
        rep, residuals = None, exc.residuals
    passed = deviation < ORACLE_MAX_DEVIATION and max(residuals) < ORACLE_MAX_RESIDUAL

    env = _header(args, consts, opts)
    env["inputs"].update({
        "lattice_L": args.lattice,
        "edge_ratio": args.ratio,
        "lattice_constant": _q(a, "m"),
        "atomic_mass": _q(args.atomic_mass, "kg"),
        "diatomic_masses": [m1, m2],
        "spring": _q(args.spring, "N/m"),
    })
    env["results"] = {
        "lambda_eff_discrete": _q(disc.value, "1/s"),
        "lambda_eff_continuum": _q(cont, "1/s"),
        "relative_deviation": _q(deviation, "1"),
        "zone_edge_weight": _q(disc.zone_edge_weight, "1"),
        "warnings": list(disc.warnings),
        "appendix": {
            "C_magnitude": None if rep is None else _q(rep.C_magnitude, "kg^-1/2"),
            "m_cell_factor": None if rep is None else _q(rep.m_cell_factor, "mass units"),
            "residuals": list(residuals),
        },
    }
    env["thresholds"] = {"deviation": ORACLE_MAX_DEVIATION, "residual": ORACLE_MAX_RESIDUAL}
    env["status"] = "ok" if passed else "check-failed"
    _emit(env, args.output, out)
    if not converged:
        return EXIT_CONVERGENCE
    return EXIT_OK if passed else EXIT_ORACLE


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "lambda-eff":
            return cmd_lambda_eff(args, out)
        if args.command == "rate":
            return cmd_rate(args, out)
        if args.command == "scan":
            return cmd_scan(args, out, err)
        return cmd_oracle(args, out, err)
    except (UsageError, CSLHeatError, OSError) as exc:
        err.write(f"cslheat {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
