"""Effective reduction rate and phonon heating power.

The effective rate is the Gaussian-weighted average of the noise spectrum
over the longitudinal acoustic branch,

    lambda_eff = 2 / (3 pi^(3/2)) * Int d^3w  exp(-w^2) w^2 lambda(omega_L(w / r_c)),

with w = r_c q dimensionless. The weight integrates to one, so white noise
returns its own rate. For an isotropic branch the angular integral is done
analytically and the radial one by adaptive quadrature
(:func:`lambda_eff`); for a general 3-vector branch the integral is sampled
by Monte Carlo (:func:`lambda_eff_mc`).
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import erfc

from . import quadrature
from .errors import (
    ConvergenceError,
    InvalidArgumentError,
    OutOfRangeError,
    UndefinedRatioError,
)
from .spectra import Dispersion, NoiseSpectrum, invert_dispersion

# CODATA 2018; hbar is exact in the 2019 SI.
HBAR = 1.054571817e-34
PROTON_MASS = 1.67262192369e-27

RADIAL_NORM = 8.0 / (3.0 * math.sqrt(math.pi))


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    m_N: float = PROTON_MASS

    def __post_init__(self):
        for name in ("hbar", "m_N"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True)
class NoiseParams:
    r_c: float
    spectrum: NoiseSpectrum

    def __post_init__(self):
        _check_r_c(self.r_c)


@dataclass(frozen=True)
class TargetBody:
    total_mass: Optional[float] = None

    def __post_init__(self):
        m = self.total_mass
        if m is not None and not (math.isfinite(m) and m > 0):
            raise InvalidArgumentError(f"total_mass must be > 0, got {m!r}")


@dataclass(frozen=True)
class QuadratureOptions:
    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 200
    w_max: float = 8.0

    def __post_init__(self):
        if not (self.rel_tol >= 0 and self.abs_tol >= 0):
            raise InvalidArgumentError("tolerances must be >= 0")
        if self.rel_tol == 0 and self.abs_tol == 0:
            raise InvalidArgumentError("at least one tolerance must be positive")
        if self.max_subdivisions < 1:
            raise InvalidArgumentError("max_subdivisions must be >= 1")
        if not (math.isfinite(self.w_max) and self.w_max >= 4):
            raise InvalidArgumentError(f"w_max must be >= 4, got {self.w_max!r}")


@dataclass(frozen=True)
class LambdaEffResult:
    value: float
    error_estimate: float
    evaluations: int
    method: str  # "radial-quadrature" | "monte-carlo"


def _check_r_c(r_c):
    if not (math.isfinite(r_c) and r_c > 0):
        raise InvalidArgumentError(f"r_c must be finite and > 0, got {r_c!r}")


def radial_tail(w_max: float) -> float:
    """Normalised weight beyond ``w_max``: (8/(3 sqrt(pi))) Int_{w_max}^inf w^4 e^{-w^2} dw."""
    w = w_max
    return float(erfc(w)) + RADIAL_NORM * math.exp(-w * w) * (0.5 * w**3 + 0.75 * w)


def radial_breakpoints(spectrum: NoiseSpectrum, dispersion: Dispersion, r_c: float, w_max: float):
    """Points in w where lambda(omega_L(w / r_c)) may jump or kink."""
    pts = set()
    for omega in spectrum.breakpoints:
        try:
            pts.add(r_c * invert_dispersion(dispersion, omega))
        except OutOfRangeError:
            continue
    pts.update(r_c * q for q in dispersion.kinks)
    return sorted(p for p in pts if 0.0 < p < w_max)


def lambda_eff(
    spectrum: NoiseSpectrum,
    dispersion: Dispersion,
    r_c: float,
    opts: QuadratureOptions = QuadratureOptions(),
) -> LambdaEffResult:
    """Effective reduction rate for an isotropic branch, in 1/s.

    Integrates (8/(3 sqrt(pi))) w^4 e^{-w^2} lambda(omega_L(w/r_c)) over
    [0, w_max] with panel edges at every spectrum knot mapped through the
    inverse dispersion. The weight beyond ``w_max``, times the spectrum's
    amplitude, is added to the error estimate.

    Raises :class:`ConvergenceError` (with ``.result`` set to the best
    estimate) if the tolerance is not met within ``opts.max_subdivisions``
    panels.
    """
    _check_r_c(r_c)

    def integrand(w):
        return RADIAL_NORM * w**4 * np.exp(-w * w) * spectrum(dispersion(w / r_c))

    q = quadrature.integrate(
        integrand,
        0.0,
        opts.w_max,
        breakpoints=radial_breakpoints(spectrum, dispersion, r_c, opts.w_max),
        rel_tol=opts.rel_tol,
        abs_tol=opts.abs_tol,
        max_subdivisions=opts.max_subdivisions,
    )
    tail = spectrum.amplitude * radial_tail(opts.w_max)
    result = LambdaEffResult(max(q.value, 0.0), q.error + tail, q.evaluations, "radial-quadrature")
    if not q.converged:
        raise ConvergenceError(
            f"lambda_eff: error {q.error:.3g} above tolerance after {q.panels} panels",
            result,
        )
    return result


# ---------------------------------------------------------------------------
# Monte Carlo


def isotropic(dispersion: Dispersion) -> Callable[[np.ndarray], np.ndarray]:
    """Lift a scalar branch to a function of (n, 3) wave vectors."""

    def omega(qvec):
        return dispersion(np.linalg.norm(qvec, axis=-1))

    return omega


@dataclass(frozen=True)
class AnisotropicLinear:
    """omega(q) = sqrt(sum_i (c_i q_i)^2) with per-axis sound speeds."""

    velocities: tuple[float, float, float]

    def __call__(self, qvec):
        return np.linalg.norm(np.asarray(qvec) * np.asarray(self.velocities), axis=-1)


def _mc_block(spectrum, dispersion3d, r_c, n, seed_seq):
    rng = np.random.Generator(np.random.Philox(seed_seq))
    # w^2 ~ Gamma(5/2) gives radial density proportional to w^4 e^{-w^2}
    w = np.sqrt(rng.gamma(2.5, size=n))
    direction = rng.standard_normal((n, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    qvec = direction * (w / r_c)[:, None]
    omega = np.asarray(dispersion3d(qvec), dtype=float)
    if not np.all(np.isfinite(omega)):
        raise InvalidArgumentError("dispersion3d returned non-finite values")
    vals = np.asarray(spectrum(omega), dtype=float)
    mean = float(vals.mean())
    m2 = float(np.sum((vals - mean) ** 2))
    return n, mean, m2


def lambda_eff_mc(
    spectrum: NoiseSpectrum,
    dispersion3d: Callable[[np.ndarray], np.ndarray],
    r_c: float,
    samples: int = 1_000_000,
    seed: int = 0,
    block_size: int = 1 << 16,
    workers: Optional[int] = None,
) -> LambdaEffResult:
    """Importance-sampled effective rate for an arbitrary 3D branch.

    Samples are split into fixed index blocks, each with its own Philox
    stream spawned from ``seed``; block statistics are merged in block order,
    so the result is bitwise reproducible for any ``workers``.
    """
    _check_r_c(r_c)
    if samples < 1000:
        raise InvalidArgumentError("samples must be >= 1000")
    if block_size < 1:
        raise InvalidArgumentError("block_size must be >= 1")
    sizes = [block_size] * (samples // block_size)
    if samples % block_size:
        sizes.append(samples % block_size)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(i):
        return _mc_block(spectrum, dispersion3d, r_c, sizes[i], seeds[i])

    if workers is None or workers <= 1:
        blocks = [run(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(run, range(len(sizes))))

    # Chan et al. pairwise merge of (count, mean, M2), in block order
    n, mean, m2 = blocks[0]
    for nb, mb, m2b in blocks[1:]:
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * nb / tot
        m2 = m2 + m2b + delta * delta * n * nb / tot
        n = tot
    stderr = math.sqrt(max(m2, 0.0) / (n - 1) / n)
    return LambdaEffResult(mean, stderr, samples, "monte-carlo")


# ---------------------------------------------------------------------------
# heating power


def heating_rate(lam_eff: float, body: TargetBody, consts: PhysicalConstants, r_c: float) -> float:
    """Heating power (3/4) hbar^2 lambda_eff M / (m_N^2 r_c^2), in W."""
    if body.total_mass is None:
        raise InvalidArgumentError("body.total_mass is required; use heating_rate_per_mass")
    return body.total_mass * heating_rate_per_mass(lam_eff, consts, r_c)


def heating_rate_per_mass(lam_eff: float, consts: PhysicalConstants, r_c: float) -> float:
    """Heating power per unit mass, in W/kg."""
    _check_r_c(r_c)
    if not (math.isfinite(lam_eff) and lam_eff >= 0):
        raise InvalidArgumentError(f"lam_eff must be finite and >= 0, got {lam_eff!r}")
    return 0.75 * consts.hbar**2 * lam_eff / (consts.m_N**2 * r_c**2)


def suppression_factor(
    spectrum: NoiseSpectrum,
    dispersion: Dispersion,
    r_c: float,
    opts: QuadratureOptions = QuadratureOptions(),
) -> float:
    """lambda_eff relative to the spectrum's amplitude; 1 for white noise."""
    amp = spectrum.amplitude
    if amp == 0:
        raise UndefinedRatioError("spectrum amplitude is zero")
    return lambda_eff(spectrum, dispersion, r_c, opts).value / amp


# ---------------------------------------------------------------------------
# parameter scans

SCAN_PARAMETERS = ("omega_c", "r_c", "c_s")


@dataclass(frozen=True)
class ScanRow:
    value: float
    lambda_eff: float
    error: float
    rate_per_mass: float
    suppression: float
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.message is None


def _with(obj, name, value):
    if not any(f.name == name for f in dataclasses.fields(obj)):
        raise InvalidArgumentError(f"{type(obj).__name__} has no parameter {name!r}")
    return dataclasses.replace(obj, **{name: value})


def _scan_row(param, value, noise, dispersion, opts, consts, hold_wc):
    spectrum, r_c = noise.spectrum, noise.r_c
    nan = math.nan
    try:
        if param == "omega_c":
            spectrum = _with(spectrum, "omega_c", value)
        elif param == "c_s":
            dispersion = _with(dispersion, "c_s", value)
        else:
            if hold_wc:
                spectrum = _with(spectrum, "omega_c", spectrum.omega_c * noise.r_c / value)
            r_c = value
        res = lambda_eff(spectrum, dispersion, r_c, opts)
    except (ConvergenceError, InvalidArgumentError) as exc:
        return ScanRow(value, nan, nan, nan, nan, str(exc))
    amp = spectrum.amplitude
    return ScanRow(
        value,
        res.value,
        res.error_estimate,
        heating_rate_per_mass(res.value, consts, r_c),
        res.value / amp if amp else nan,
    )


def scan(
    param: str,
    values: Sequence[float],
    noise: NoiseParams,
    dispersion: Dispersion,
    opts: QuadratureOptions = QuadratureOptions(),
    consts: PhysicalConstants = PhysicalConstants(),
    hold_wc: bool = False,
    workers: Optional[int] = None,
) -> list[ScanRow]:
    """Evaluate lambda_eff, heating rate and suppression over a 1D grid.

    ``param`` is one of ``omega_c`` (spectrum cutoff), ``r_c`` or ``c_s``
    (sound speed). With ``hold_wc`` an ``r_c`` scan rescales omega_c so that
    omega_c * r_c stays at its base value. Rows come back in grid order;
    a row that fails to converge carries NaNs and a message.
    """
    if param not in SCAN_PARAMETERS:
        raise InvalidArgumentError(f"param must be one of {SCAN_PARAMETERS}, got {param!r}")
    values = [float(v) for v in values]
    if not values or not all(math.isfinite(v) for v in values):
        raise InvalidArgumentError("scan grid must be nonempty and finite")
    if hold_wc and param != "r_c":
        raise InvalidArgumentError("hold_wc applies only to r_c scans")

    def row(v):
        return _scan_row(param, v, noise, dispersion, opts, consts, hold_wc)

    if workers is None or workers <= 1:
        return [row(v) for v in values]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(row, values))
