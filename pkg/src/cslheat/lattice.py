"""Finite-lattice checks of the continuum heating formula.

A periodic simple-cubic monatomic crystal with L^3 cells supports one
longitudinal phonon per allowed wave vector. Summing the golden-rule energy
gain over these discrete one-phonon final states gives a lattice version of
lambda_eff that must approach the continuum integral as L grows.

The diatomic chain covers the multi-atom unit cell: at k = 0 the acoustic
polarisation is proportional to sqrt(m_kappa), optical modes leave the cell
centre of mass at rest, and the squared summed amplitude is the cell mass.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import CheckFailure, InternalConsistencyError, InvalidArgumentError
from .heating import PhysicalConstants
from .spectra import Dispersion, NoiseSpectrum

# relative Gaussian weight exp(-(pi r_c / a)^2) allowed at the zone face
ZONE_EDGE_WEIGHT_LIMIT = 1e-8
MIN_EDGE_RATIO = 5.0


@dataclass(frozen=True)
class MonatomicLattice:
    """Periodic cubic lattice; only the longitudinal displacement is modelled."""

    a: float
    L: int
    m_A: float
    dispersion: Dispersion

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise InvalidArgumentError("lattice constant a must be > 0")
        if int(self.L) != self.L or self.L < 4 or self.L % 2:
            raise InvalidArgumentError(f"L must be an even integer >= 4, got {self.L!r}")
        if not (math.isfinite(self.m_A) and self.m_A > 0):
            raise InvalidArgumentError("atomic mass m_A must be > 0")

    @property
    def n_cells(self) -> int:
        return self.L**3

    @property
    def total_mass(self) -> float:
        return self.n_cells * self.m_A

    @property
    def dk(self) -> float:
        return 2.0 * math.pi / (self.L * self.a)


def bz_grid(lat: MonatomicLattice) -> np.ndarray:
    """All L^3 allowed wave vectors, shape (L^3, 3), integer indices in (-L/2, L/2]."""
    n = np.arange(-lat.L // 2 + 1, lat.L // 2 + 1)
    idx = np.stack(np.meshgrid(n, n, n, indexing="ij"), axis=-1).reshape(-1, 3)
    return idx * lat.dk


def one_phonon_amplitude_factor(lat: MonatomicLattice, k, consts=PhysicalConstants()):
    """|(sum_l e^{iq.R_l} q.u_l)_{f0}|^2 at q = k for the one-phonon state k.

    From the mode expansion u_l = sum_k sqrt(hbar / (2 N m_A omega_k))
    (e^{ik.R_l} a_k + h.c.) and the coherent site sum N delta_{q,k}, this is
    N hbar |k|^2 / (2 m_A omega_L(|k|)), dimensionless. Accepts one wave
    vector or an (n, 3) array.
    """
    kv = np.asarray(k, dtype=float)
    k2 = np.sum(kv * kv, axis=-1)
    if np.any(k2 == 0):
        raise InvalidArgumentError("k = 0 is the uniform translation, not a phonon")
    omega = lat.dispersion(np.sqrt(k2))
    if np.any(np.asarray(omega) <= 0):
        raise InvalidArgumentError("omega_L(k) must be > 0 for k != 0")
    return lat.n_cells * consts.hbar * k2 / (2.0 * lat.m_A * omega)


@dataclass
class BZSumResult:
    value: float
    continuum_prefactor: float
    rate: float
    points: int
    edge_ratio: float
    zone_edge_weight: float
    warnings: list[str] = field(default_factory=list)


def bz_sum_lambda_eff(
    lat: MonatomicLattice,
    spectrum: NoiseSpectrum,
    r_c: float,
    consts: PhysicalConstants = PhysicalConstants(),
) -> BZSumResult:
    """Discrete golden-rule lambda_eff on the lattice's Brillouin-zone grid.

    For each nonzero grid vector k the noise integral over q collapses onto
    the phonon wave vector with weight N (2 pi)^3 / Omega, giving the energy
    gain rate

        r_c^3 / (pi^(3/2) m_N^2) * sum_k dk^3 e^{-r_c^2 k^2} lambda(omega_k)
            hbar omega_k m_A^2 F(k),

    with F the one-phonon factor. Dividing by the white-noise normalisation
    (3/4) hbar^2 M / (m_N^2 r_c^2) returns lambda_eff.
    """
    if not (math.isfinite(r_c) and r_c > 0):
        raise InvalidArgumentError("r_c must be > 0")
    notes = []
    edge_ratio = math.pi * r_c / lat.a
    edge_weight = math.exp(-edge_ratio**2)
    if edge_ratio < MIN_EDGE_RATIO:
        notes.append(f"pi r_c / a = {edge_ratio:.3g} below {MIN_EDGE_RATIO}")
    if edge_weight > ZONE_EDGE_WEIGHT_LIMIT:
        notes.append(f"zone-edge Gaussian weight {edge_weight:.3g} above {ZONE_EDGE_WEIGHT_LIMIT}")
    for msg in notes:
        warnings.warn(msg, stacklevel=2)

    k = bz_grid(lat)
    k2 = np.sum(k * k, axis=1)
    keep = k2 > 0
    k, k2 = k[keep], k2[keep]
    omega = np.asarray(lat.dispersion(np.sqrt(k2)))
    lam = np.asarray(spectrum(omega))
    live = (lam > 0) & (omega > 0)
    terms = np.zeros_like(k2)
    f = one_phonon_amplitude_factor(lat, k[live], consts)
    terms[live] = (
        np.exp(-r_c**2 * k2[live]) * lam[live] * consts.hbar * omega[live] * lat.m_A**2 * f
    )
    rate = r_c**3 / (math.pi**1.5 * consts.m_N**2) * lat.dk**3 * float(np.sum(terms))
    norm = 0.75 * consts.hbar**2 * lat.total_mass / (consts.m_N**2 * r_c**2)
    return BZSumResult(
        value=rate / norm,
        continuum_prefactor=norm,
        rate=rate,
        points=lat.n_cells,
        edge_ratio=edge_ratio,
        zone_edge_weight=edge_weight,
        warnings=notes,
    )


class OccupancyGain(NamedTuple):
    gain_up: float
    gain_down: float
    net: float


def occupancy_cancellation_check(n: int, omega: float, hbar: float = PhysicalConstants().hbar):
    """Energy gain from an n-phonon initial state, split by channel.

    Creation contributes (n + 1) hbar omega, annihilation -n hbar omega; the
    integer coefficient (n + 1) - n is formed before multiplying, so the net
    is exactly hbar omega.
    """
    if int(n) != n or n < 0:
        raise InvalidArgumentError(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    quantum = hbar * omega
    coeff = (n + 1) - n
    net = coeff * quantum
    if net != quantum:  # pragma: no cover
        raise InternalConsistencyError("occupation did not cancel")
    return OccupancyGain((n + 1) * quantum, -n * quantum, net)


# ---------------------------------------------------------------------------
# diatomic chain


@dataclass(frozen=True)
class DiatomicCell:
    m1: float
    m2: float
    K: float
    a: float = 1.0

    def __post_init__(self):
        for name in ("m1", "m2", "K", "a"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidArgumentError(f"{name} must be > 0, got {v!r}")

    @property
    def masses(self) -> np.ndarray:
        return np.array([self.m1, self.m2])

    @property
    def m_cell(self) -> float:
        return self.m1 + self.m2

    @property
    def sound_speed(self) -> float:
        return math.sqrt(self.K * self.a**2 / (2.0 * self.m_cell))


class Branches(NamedTuple):
    omega_acoustic: float
    omega_optical: float
    e_acoustic: np.ndarray
    e_optical: np.ndarray


def dynamical_matrix(cell: DiatomicCell, k: float) -> np.ndarray:
    """Mass-weighted nearest-neighbour dynamical matrix of the diatomic chain."""
    off = -cell.K / math.sqrt(cell.m1 * cell.m2) * (1.0 + np.exp(-1j * k * cell.a))
    return np.array([
        [2.0 * cell.K / cell.m1, off],
        [np.conj(off), 2.0 * cell.K / cell.m2],
    ])


def _fix_phase(v):
    i = int(np.argmax(np.abs(v) > 1e-14 * np.max(np.abs(v))))
    return v * (np.abs(v[i]) / v[i])


def diatomic_branches(cell: DiatomicCell, k: float) -> Branches:
    """Acoustic and optical frequencies and unit polarisation vectors at k.

    Eigenvectors are rephased so their first nonzero component is real and
    positive.
    """
    if not (math.isfinite(k) and abs(k) <= math.pi / cell.a * (1 + 1e-12)):
        raise InvalidArgumentError(f"|k| must be <= pi/a, got {k!r}")
    D = dynamical_matrix(cell, k)
    evals, evecs = np.linalg.eigh(D)
    scale = float(np.trace(D).real)
    floor = 1e-12 * scale
    if evals[0] < -floor:
        raise InternalConsistencyError(f"negative eigenvalue {evals[0]!r}")
    # roundoff-level eigenvalues are the zero-frequency translation
    evals = np.where(evals <= floor, 0.0, evals)
    e_ac = _fix_phase(evecs[:, 0])
    e_op = _fix_phase(evecs[:, 1])
    return Branches(math.sqrt(evals[0]), math.sqrt(evals[1]), e_ac, e_op)


@dataclass(frozen=True)
class AppendixReport:
    C_magnitude: float
    m_cell: float
    m_cell_factor: float
    acoustic_residual: float
    optical_com_residual: float
    m_cell_residual: float

    @property
    def residuals(self) -> tuple[float, float, float]:
        return (self.acoustic_residual, self.optical_com_residual, self.m_cell_residual)


def appendix_checks(cell: DiatomicCell, tol: float = 1e-10) -> AppendixReport:
    """Check the k = 0 multi-atom relations for a diatomic cell.

    (a) acoustic e_kappa = sqrt(m_kappa) |C| with |C| = (sum m)^(-1/2);
    (b) sum_kappa sqrt(m_kappa) e_kappa(optical) = 0;
    (c) (sum_kappa m_kappa |C|)^2 = m_cell.

    Residuals are relative. Raises :class:`CheckFailure` if any exceeds ``tol``.
    """
    br = diatomic_branches(cell, 0.0)
    m = cell.masses
    sqm = np.sqrt(m)
    C = 1.0 / math.sqrt(cell.m_cell)
    res_a = float(np.max(np.abs(br.e_acoustic - sqm * C)))
    res_b = float(abs(np.sum(sqm * br.e_optical)) / math.sqrt(cell.m_cell))
    # summed one-phonon amplitude, using the computed eigenvector
    amp = float(np.sum(sqm * br.e_acoustic.real))
    factor = amp**2
    res_c = abs(factor - cell.m_cell) / cell.m_cell
    report = AppendixReport(C, cell.m_cell, factor, res_a, res_b, res_c)
    if max(report.residuals) > tol:
        raise CheckFailure(f"appendix check residuals {report.residuals} above {tol}", report.residuals)
    return report


def dipole_approx_error(q: float, u_max: float) -> float:
    """Uniform bound (q u_max)^2 / 2 on |e^{iqu} - (1 + iqu)|."""
    if q < 0 or u_max < 0:
        raise InvalidArgumentError("q and u_max must be >= 0")
    x = q * u_max
    return 0.5 * x * x
