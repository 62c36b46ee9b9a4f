"""Noise power spectra and longitudinal acoustic dispersions.

Spectra map an angular frequency (rad/s) to a reduction rate (1/s) and are
even in frequency. Dispersions map a wave number (rad/m) to an angular
frequency (rad/s), vanish at the origin and are nondecreasing.

All objects are frozen dataclasses; evaluation accepts scalars or arrays and
returns the same shape (a Python float for scalar input).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    DomainError,
    FormatError,
    InvalidArgumentError,
    OutOfRangeError,
    ValidationError,
)

ArrayLike = Union[float, Sequence[float], np.ndarray]

__all__ = [
    "NoiseSpectrum",
    "White",
    "HardCutoff",
    "ExpCutoff",
    "Lorentzian",
    "TabulatedSpectrum",
    "Dispersion",
    "Linear",
    "DebyeCapped",
    "SineBand",
    "TabulatedDispersion",
    "evaluate_spectrum",
    "gamma_of",
    "evaluate_dispersion",
    "invert_dispersion",
    "load_tabulated",
    "read_tabulated_csv",
]


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise InvalidArgumentError(f"{name} must be finite and > 0, got {value!r}")


def _nonnegative(name, value):
    if not (math.isfinite(value) and value >= 0):
        raise InvalidArgumentError(f"{name} must be finite and >= 0, got {value!r}")


def _as_output(values, scalar):
    return float(values) if scalar else values


# ---------------------------------------------------------------------------
# spectra


class NoiseSpectrum:
    """Base class for reduction-rate spectra lambda(omega)."""

    def __call__(self, omega: ArrayLike):
        w = np.asarray(omega, dtype=float)
        if not np.all(np.isfinite(w)):
            raise InvalidArgumentError("omega must be finite")
        return _as_output(self._rate(np.abs(w)), w.ndim == 0)

    def _rate(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def amplitude(self) -> float:
        """Upper bound of the spectrum (lambda0, or the largest knot value)."""
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Frequencies where the spectrum is discontinuous or has a kink."""
        return ()


@dataclass(frozen=True)
class White(NoiseSpectrum):
    lambda0: float

    def __post_init__(self):
        _nonnegative("lambda0", self.lambda0)

    def _rate(self, w):
        return np.full_like(w, self.lambda0)

    @property
    def amplitude(self):
        return self.lambda0


@dataclass(frozen=True)
class HardCutoff(NoiseSpectrum):
    """lambda0 below omega_c (strictly), zero at and above it."""

    lambda0: float
    omega_c: float

    def __post_init__(self):
        _nonnegative("lambda0", self.lambda0)
        _positive("omega_c", self.omega_c)

    def _rate(self, w):
        return np.where(w < self.omega_c, self.lambda0, 0.0)

    @property
    def amplitude(self):
        return self.lambda0

    @property
    def breakpoints(self):
        return (self.omega_c,)


@dataclass(frozen=True)
class ExpCutoff(NoiseSpectrum):
    lambda0: float
    omega_c: float

    def __post_init__(self):
        _nonnegative("lambda0", self.lambda0)
        _positive("omega_c", self.omega_c)

    def _rate(self, w):
        return self.lambda0 * np.exp(-w / self.omega_c)

    @property
    def amplitude(self):
        return self.lambda0


@dataclass(frozen=True)
class Lorentzian(NoiseSpectrum):
    lambda0: float
    omega_c: float

    def __post_init__(self):
        _nonnegative("lambda0", self.lambda0)
        _positive("omega_c", self.omega_c)

    def _rate(self, w):
        x = w / self.omega_c
        return self.lambda0 / (1.0 + x * x)

    @property
    def amplitude(self):
        return self.lambda0


@dataclass(frozen=True)
class TabulatedSpectrum(NoiseSpectrum):
    """Piecewise-linear spectrum through ``(omega, rate)`` knots.

    Below the first knot the first value is held; beyond the last knot the
    spectrum is zero. Use :func:`load_tabulated` to build one from raw records.
    """

    omega: tuple[float, ...]
    rate: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(map(float, self.omega)))
        object.__setattr__(self, "rate", tuple(map(float, self.rate)))
        _check_knots(self.omega, self.rate)

    def _rate(self, w):
        return np.interp(w, self.omega, self.rate, right=0.0)

    @property
    def amplitude(self):
        return max(self.rate)

    @property
    def breakpoints(self):
        return tuple(self.omega)


def evaluate_spectrum(spec: NoiseSpectrum, omega: ArrayLike):
    """Reduction rate lambda(|omega|) in 1/s."""
    return spec(omega)


def gamma_of(spec: NoiseSpectrum, omega: ArrayLike, r_c: float):
    """Noise correlator strength 8 pi^(3/2) r_c^3 lambda(omega), in m^3/s."""
    _positive("r_c", r_c)
    return 8.0 * math.pi**1.5 * r_c**3 * spec(omega)


# ---------------------------------------------------------------------------
# dispersions


class Dispersion:
    """Base class for longitudinal acoustic branches omega_L(q)."""

    def __call__(self, q: ArrayLike):
        k = np.asarray(q, dtype=float)
        if not np.all(np.isfinite(k)):
            raise InvalidArgumentError("q must be finite")
        if np.any(k < 0):
            raise InvalidArgumentError("q must be >= 0")
        return _as_output(self._omega(k), k.ndim == 0)

    def _omega(self, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def supremum(self) -> float:
        raise NotImplementedError

    @property
    def kinks(self) -> tuple[float, ...]:
        """Wave numbers where omega_L is not smooth."""
        return ()

    @property
    def q_scale(self) -> float:
        """A representative wave number, used to seed root bracketing."""
        return 1.0


@dataclass(frozen=True)
class Linear(Dispersion):
    c_s: float

    def __post_init__(self):
        _positive("c_s", self.c_s)

    def _omega(self, q):
        return self.c_s * q

    @property
    def supremum(self):
        return math.inf


@dataclass(frozen=True)
class DebyeCapped(Dispersion):
    c_s: float
    omega_d: float

    def __post_init__(self):
        _positive("c_s", self.c_s)
        _positive("omega_d", self.omega_d)

    def _omega(self, q):
        return np.minimum(self.c_s * q, self.omega_d)

    @property
    def supremum(self):
        return self.omega_d

    @property
    def kinks(self):
        return (self.omega_d / self.c_s,)

    @property
    def q_scale(self):
        return self.omega_d / self.c_s


@dataclass(frozen=True)
class SineBand(Dispersion):
    omega_max: float
    q_edge: float

    def __post_init__(self):
        _positive("omega_max", self.omega_max)
        _positive("q_edge", self.q_edge)

    def _omega(self, q):
        x = np.minimum(q, self.q_edge)
        return self.omega_max * np.sin(0.5 * math.pi * x / self.q_edge)

    @property
    def supremum(self):
        return self.omega_max

    @property
    def kinks(self):
        return (self.q_edge,)

    @property
    def q_scale(self):
        return self.q_edge


@dataclass(frozen=True)
class TabulatedDispersion(Dispersion):
    """Piecewise-linear branch through ``(q, omega)`` knots starting at (0, 0).

    Constant extrapolation beyond the last knot.
    """

    q: tuple[float, ...]
    omega: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(map(float, self.q)))
        object.__setattr__(self, "omega", tuple(map(float, self.omega)))
        _check_knots(self.q, self.omega)
        if self.q[0] != 0.0 or self.omega[0] != 0.0:
            raise ValidationError("tabulated dispersion must start at (0, 0)", [0])
        bad = [i for i in range(1, len(self.omega)) if self.omega[i] < self.omega[i - 1]]
        if bad:
            raise ValidationError(f"dispersion decreases at knot indices {bad}", bad)

    def _omega(self, q):
        return np.interp(q, self.q, self.omega)

    @property
    def supremum(self):
        return self.omega[-1]

    @property
    def kinks(self):
        return tuple(self.q[1:])

    @property
    def q_scale(self):
        return self.q[-1]


def evaluate_dispersion(disp: Dispersion, q: ArrayLike):
    """Longitudinal acoustic frequency omega_L(q) in rad/s."""
    return disp(q)


def invert_dispersion(disp: Dispersion, omega: float) -> float:
    """Smallest wave number q with omega_L(q) = omega.

    Bisection on the bracket [0, hi], carried to full double precision
    (well inside a relative width of 1e-12). Raises :class:`OutOfRangeError`
    when ``omega`` exceeds the supremum of the branch.
    """
    if not math.isfinite(omega) or omega < 0:
        raise InvalidArgumentError(f"omega must be finite and >= 0, got {omega!r}")
    if omega > disp.supremum:
        raise OutOfRangeError(f"omega={omega!r} above dispersion supremum {disp.supremum!r}")
    if omega == 0.0:
        return 0.0

    def f(q):
        return float(disp._omega(np.asarray(q, dtype=float)))

    lo, hi = 0.0, disp.q_scale
    for _ in range(2100):
        if f(hi) >= omega:
            break
        lo, hi = hi, 2.0 * hi
    else:  # pragma: no cover - supremum check guarantees a bracket
        raise OutOfRangeError(f"could not bracket omega={omega!r}")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return hi
        if f(mid) >= omega:
            hi = mid
        else:
            lo = mid


# ---------------------------------------------------------------------------
# tabulated input


def _check_knots(x, y):
    if len(x) != len(y):
        raise FormatError("knot columns have different lengths")
    if len(x) < 2:
        raise FormatError("need at least 2 knots")
    xa, ya = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise FormatError("knot values must be finite")
    if np.any(xa < 0):
        raise DomainError("knot abscissae must be >= 0")
    if np.any(ya < 0):
        raise DomainError("knot values must be >= 0")
    if np.any(np.diff(xa) <= 0):
        raise FormatError("knot abscissae must be strictly increasing")


def load_tabulated(records: Iterable[Sequence[float]], kind: str):
    """Build a tabulated spectrum or dispersion from ``(x, y)`` pairs.

    ``kind`` is ``"spectrum"`` (omega, rate) or ``"dispersion"`` (q, omega).
    For dispersions the origin knot is prepended when missing.
    """
    pairs = [tuple(r) for r in records]
    if any(len(p) != 2 for p in pairs):
        raise FormatError("each record must be an (x, y) pair")
    try:
        x = [float(p[0]) for p in pairs]
        y = [float(p[1]) for p in pairs]
    except (TypeError, ValueError) as exc:
        raise FormatError(f"non-numeric record: {exc}") from None
    if len(x) < 2:
        raise FormatError("need at least 2 records")
    if kind == "spectrum":
        return TabulatedSpectrum(tuple(x), tuple(y))
    if kind == "dispersion":
        if x and x[0] != 0.0:
            x.insert(0, 0.0)
            y.insert(0, 0.0)
        _check_knots(x, y)
        return TabulatedDispersion(tuple(x), tuple(y))
    raise InvalidArgumentError(f"kind must be 'spectrum' or 'dispersion', got {kind!r}")


def read_tabulated_csv(path: Union[str, Path], kind: str):
    """Read a two-column CSV file into a tabulated spectrum or dispersion.

    Lines starting with ``#`` are skipped, as is a non-numeric header row.
    """
    records = []
    with open(path, newline="") as fh:
        rows = csv.reader(line for line in fh if not line.lstrip().startswith("#"))
        for lineno, row in enumerate(rows):
            row = [c.strip() for c in row if c.strip()]
            if not row:
                continue
            if len(row) != 2:
                raise FormatError(f"{path}: expected 2 columns, got {len(row)}")
            try:
                records.append((float(row[0]), float(row[1])))
            except ValueError:
                if lineno == 0 and not records:
                    continue  # header
                raise FormatError(f"{path}: non-numeric row {row!r}") from None
    return load_tabulated(records, kind)
