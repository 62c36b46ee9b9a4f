import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cslheat import (
    AnisotropicLinear,
    ConvergenceError,
    DebyeCapped,
    ExpCutoff,
    HardCutoff,
    InvalidArgumentError,
    Linear,
    Lorentzian,
    NoiseParams,
    PhysicalConstants,
    QuadratureOptions,
    SineBand,
    TabulatedDispersion,
    TabulatedSpectrum,
    TargetBody,
    UndefinedRatioError,
    White,
    heating_rate,
    heating_rate_per_mass,
    isotropic,
    lambda_eff,
    lambda_eff_mc,
    scan,
    suppression_factor,
)
from cslheat.heating import radial_breakpoints, radial_tail

C_S = 5000.0
R_C = 1e-7


def cutoff_for(w_c, c_s=C_S, r_c=R_C):
    return w_c * c_s / r_c


def hard_cutoff_closed_form(w_c):
    """erf(w) - (8/(3 sqrt(pi))) e^{-w^2} (w^3/2 + 3w/4), at 40 digits."""
    with mpmath.workdps(40):
        w = mpmath.mpf(w_c)
        val = mpmath.erf(w) - 8 / (3 * mpmath.sqrt(mpmath.pi)) * mpmath.exp(-w * w) * (
            w**3 / 2 + 3 * w / 4
        )
        return float(val)


def riemann_oracle(w_c, n=10**7):
    """Midpoint sum of (8/(3 sqrt(pi))) w^4 e^{-w^2} over [0, w_c]."""
    h = w_c / n
    w = (np.arange(n) + 0.5) * h
    return 8 / (3 * math.sqrt(math.pi)) * float(np.sum(w**4 * np.exp(-w * w))) * h


# frozen from hard_cutoff_closed_form (mpmath, 40 digits)
HARD_CUTOFF_SUPPRESSION = {
    0.1: 2.987601531906594e-06,
    0.5: 0.007876706767370408,
    1.0: 0.15085496391539036,
    2.0: 0.8437643724222777,
    5.0: 0.9999999986142027,
}


def test_closed_form_matches_riemann_oracle():
    # the closed form is checked against brute force before it is trusted
    assert riemann_oracle(1.0) == pytest.approx(hard_cutoff_closed_form(1.0), rel=1e-12)
    assert hard_cutoff_closed_form(1.0) == pytest.approx(0.15085, abs=1e-5)


@pytest.mark.parametrize("w_c", sorted(HARD_CUTOFF_SUPPRESSION))
def test_frozen_values(w_c):
    assert HARD_CUTOFF_SUPPRESSION[w_c] == pytest.approx(hard_cutoff_closed_form(w_c), rel=1e-15)


# -- lambda_eff -------------------------------------------------------------

DISPERSIONS = [
    Linear(C_S),
    DebyeCapped(C_S, 2e10),
    SineBand(6e10, 2e7),
    TabulatedDispersion((0.0, 1e7, 3e7, 6e7), (0.0, 5e10, 1.2e11, 1.5e11)),
]


@pytest.mark.parametrize("disp", DISPERSIONS, ids=lambda d: type(d).__name__)
@pytest.mark.parametrize("r_c", [1e-8, 1e-7, 1e-6])
def test_white_noise_identity(disp, r_c):
    res = lambda_eff(White(1.0), disp, r_c)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.method == "radial-quadrature"


@pytest.mark.parametrize("w_c", sorted(HARD_CUTOFF_SUPPRESSION))
def test_hard_cutoff_matches_closed_form(w_c):
    res = lambda_eff(HardCutoff(1.0, cutoff_for(w_c)), Linear(C_S), R_C)
    assert res.value == pytest.approx(HARD_CUTOFF_SUPPRESSION[w_c], rel=1e-9)
    assert res.error_estimate <= 1e-9 * res.value + 1e-20


def test_small_cutoff_series():
    w = 0.1
    series = 8 / (3 * math.sqrt(math.pi)) * (w**5 / 5 - w**7 / 7)
    val = suppression_factor(HardCutoff(1.0, cutoff_for(w)), Linear(C_S), R_C)
    assert val == pytest.approx(2.99e-6, rel=5e-3)
    assert val == pytest.approx(series, rel=1e-4)


def test_zero_spectrum():
    res = lambda_eff(White(0.0), Linear(C_S), R_C)
    assert res.value == 0.0 and res.error_estimate == 0.0


def test_breakpoint_lands_on_cutoff():
    pts = radial_breakpoints(HardCutoff(1.0, cutoff_for(1.0)), Linear(C_S), R_C, 8.0)
    assert pts == [pytest.approx(1.0, rel=1e-15)]
    # cutoff above the branch maximum: no breakpoint
    assert radial_breakpoints(HardCutoff(1.0, 1e13), SineBand(1e12, 1e8), R_C, 8.0) == []


def test_tail_bound_is_tiny_at_default_truncation():
    assert radial_tail(8.0) < 1e-24
    assert radial_tail(0.0) == pytest.approx(1.0, rel=1e-15)
    assert radial_tail(1.0) == pytest.approx(1.0 - HARD_CUTOFF_SUPPRESSION[1.0], rel=1e-14)


def test_convergence_error_carries_best_estimate():
    opts = QuadratureOptions(rel_tol=1e-15, max_subdivisions=3)
    with pytest.raises(ConvergenceError) as info:
        lambda_eff(Lorentzian(1.0, 3e10), Linear(C_S), R_C, opts)
    best = info.value.result
    assert best is not None and best.value == pytest.approx(
        lambda_eff(Lorentzian(1.0, 3e10), Linear(C_S), R_C).value, rel=1e-6
    )


def test_invalid_options():
    with pytest.raises(InvalidArgumentError):
        QuadratureOptions(w_max=3.0)
    with pytest.raises(InvalidArgumentError):
        QuadratureOptions(rel_tol=-1.0)
    with pytest.raises(InvalidArgumentError):
        lambda_eff(White(1.0), Linear(C_S), 0.0)


def test_suppression_undefined_for_zero_amplitude():
    with pytest.raises(UndefinedRatioError):
        suppression_factor(White(0.0), Linear(C_S), R_C)


def test_suppression_white_is_one():
    assert suppression_factor(White(3.0), SineBand(1e11, 1e8), R_C) == pytest.approx(1.0, rel=1e-12)


def test_tabulated_spectrum_uses_max_knot():
    spec = TabulatedSpectrum((0.0, 1e10, 1e12), (2.0, 4.0, 4.0))
    s = suppression_factor(spec, Linear(C_S), R_C)
    assert 0.5 <= s <= 1.0


# -- properties -------------------------------------------------------------

cutoff_families = st.sampled_from([HardCutoff, ExpCutoff, Lorentzian])


@given(fam=cutoff_families, wc1=st.floats(0.05, 6), ratio=st.floats(1.0, 10.0))
@settings(max_examples=60, deadline=None)
def test_monotone_in_spectrum(fam, wc1, ratio):
    lo = lambda_eff(fam(1.0, cutoff_for(wc1)), Linear(C_S), R_C)
    hi = lambda_eff(fam(1.0, cutoff_for(wc1 * ratio)), Linear(C_S), R_C)
    assert lo.value <= hi.value + lo.error_estimate + hi.error_estimate


@given(
    fam=cutoff_families,
    w_c=st.floats(0.05, 6),
    r_c=st.sampled_from([1e-8, 1e-7, 1e-6]),
    c_s=st.floats(1e3, 1e4),
)
@settings(max_examples=60, deadline=None)
def test_dimensionless_group(fam, w_c, r_c, c_s):
    ref = suppression_factor(fam(1.0, cutoff_for(w_c)), Linear(C_S), R_C)
    val = suppression_factor(fam(1.0, cutoff_for(w_c, c_s, r_c)), Linear(c_s), r_c)
    assert val == pytest.approx(ref, rel=1e-9, abs=1e-15)


@given(fam=cutoff_families, w_c=st.floats(0.05, 6), s=st.sampled_from([0.1, 10.0]))
@settings(max_examples=60, deadline=None)
def test_frequency_scaling_invariance(fam, w_c, s):
    base = lambda_eff(fam(1.0, cutoff_for(w_c)), SineBand(8e10, 3e7), R_C).value
    scaled = lambda_eff(fam(1.0, s * cutoff_for(w_c)), SineBand(s * 8e10, 3e7), R_C).value
    assert scaled == pytest.approx(base, rel=1e-9, abs=1e-15)


# -- Monte Carlo ------------------------------------------------------------


def test_mc_white_exact():
    res = lambda_eff_mc(White(1.0), isotropic(SineBand(1e11, 1e7)), R_C, samples=20_000)
    assert res.value == 1.0 and res.error_estimate == 0.0
    assert res.method == "monte-carlo" and res.evaluations == 20_000


def test_mc_hard_cutoff_agrees_with_closed_form():
    # z-scores over ten fixed seeds: at most one outside 3 sigma, none outside 4,
    # and their mean consistent with zero
    args = (HardCutoff(1.0, cutoff_for(1.0)), isotropic(Linear(C_S)), R_C)
    z = []
    for seed in range(10):
        res = lambda_eff_mc(*args, samples=10**6, seed=seed)
        z.append((res.value - HARD_CUTOFF_SUPPRESSION[1.0]) / res.error_estimate)
    z = np.array(z)
    assert np.sum(np.abs(z) > 3) <= 1 and np.all(np.abs(z) < 4)
    assert abs(z.mean()) < 3 / math.sqrt(len(z))


def test_mc_is_deterministic_and_worker_independent():
    args = (Lorentzian(1.0, cutoff_for(1.0)), isotropic(Linear(C_S)), R_C)
    a = lambda_eff_mc(*args, samples=50_000, seed=7, block_size=4096)
    b = lambda_eff_mc(*args, samples=50_000, seed=7, block_size=4096)
    c = lambda_eff_mc(*args, samples=50_000, seed=7, block_size=4096, workers=4)
    assert a == b == c
    d = lambda_eff_mc(*args, samples=50_000, seed=8, block_size=4096)
    assert d.value != a.value


def test_mc_radial_distribution_moments():
    # with lambda(omega) = omega^2 and omega = |q| r_c, the mean is E[w^2] = 5/2
    class Quadratic(White):
        def _rate(self, w):
            return w * w

    res = lambda_eff_mc(Quadratic(1.0), isotropic(Linear(R_C)), R_C, samples=200_000)
    assert res.value == pytest.approx(2.5, abs=4 * res.error_estimate)


def test_mc_anisotropic_reduces_to_isotropic():
    spec = HardCutoff(1.0, cutoff_for(1.0))
    iso = lambda_eff_mc(spec, isotropic(Linear(C_S)), R_C, samples=100_000, seed=3)
    aniso = lambda_eff_mc(spec, AnisotropicLinear((C_S, C_S, C_S)), R_C, samples=100_000, seed=3)
    assert aniso.value == pytest.approx(iso.value, rel=1e-12)


def test_mc_anisotropic_slower_axis_admits_more():
    spec = HardCutoff(1.0, cutoff_for(1.0))
    iso = lambda_eff_mc(spec, isotropic(Linear(C_S)), R_C, samples=100_000, seed=3)
    slow = lambda_eff_mc(spec, AnisotropicLinear((C_S, C_S, 0.5 * C_S)), R_C, samples=100_000, seed=3)
    assert slow.value > iso.value


def test_mc_validation():
    with pytest.raises(InvalidArgumentError):
        lambda_eff_mc(White(1.0), isotropic(Linear(C_S)), R_C, samples=999)
    with pytest.raises(InvalidArgumentError):
        lambda_eff_mc(White(1.0), lambda q: np.full(len(q), np.nan), R_C, samples=1000)


# -- heating rates ----------------------------------------------------------


def test_rate_zero():
    assert heating_rate(0.0, TargetBody(1.0), PhysicalConstants(), R_C) == 0.0


def test_rate_codata_value():
    # recomputed by hand from the CODATA 2018 constants
    expected = 0.75 * (1.054571817e-34) ** 2 / ((1.67262192369e-27) ** 2 * (1e-7) ** 2)
    got = heating_rate(1.0, TargetBody(1.0), PhysicalConstants(), 1e-7)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got == pytest.approx(0.2981, abs=1e-4)


def test_rate_linear_in_mass_and_lambda():
    c = PhysicalConstants()
    one = heating_rate(0.7, TargetBody(1.0), c, R_C)
    assert heating_rate(0.7, TargetBody(2.0), c, R_C) == pytest.approx(2 * one, rel=1e-15)
    assert heating_rate(1.4, TargetBody(1.0), c, R_C) == pytest.approx(2 * one, rel=1e-15)


def test_per_mass_equals_unit_mass():
    c = PhysicalConstants()
    assert heating_rate_per_mass(0.3, c, R_C) == heating_rate(0.3, TargetBody(1.0), c, R_C)


def test_per_mass_white_noise_standard_formula():
    c = PhysicalConstants()
    lam = lambda_eff(White(2.5), Linear(C_S), R_C).value
    assert heating_rate_per_mass(lam, c, R_C) == pytest.approx(
        0.75 * c.hbar**2 * 2.5 / (c.m_N**2 * R_C**2), rel=1e-12
    )


def test_per_mass_inverse_square_in_r_c():
    c = PhysicalConstants()
    assert heating_rate_per_mass(1.0, c, 2 * R_C) == pytest.approx(
        heating_rate_per_mass(1.0, c, R_C) / 4, rel=1e-15
    )


def test_rate_validation():
    with pytest.raises(InvalidArgumentError):
        TargetBody(-1.0)
    with pytest.raises(InvalidArgumentError):
        heating_rate(1.0, TargetBody(), PhysicalConstants(), R_C)
    with pytest.raises(InvalidArgumentError):
        heating_rate_per_mass(-1.0, PhysicalConstants(), R_C)
    with pytest.raises(InvalidArgumentError):
        PhysicalConstants(hbar=0.0)


# -- scan -------------------------------------------------------------------


def test_scan_omega_c_monotone():
    grid = np.geomspace(cutoff_for(0.05), cutoff_for(6), 25)
    rows = scan("omega_c", grid, NoiseParams(R_C, HardCutoff(1.0, 1.0)), Linear(C_S))
    assert [r.value for r in rows] == list(grid)
    sup = [r.suppression for r in rows]
    assert all(b >= a for a, b in zip(sup, sup[1:]))


def test_scan_single_point_matches_direct_calls():
    noise = NoiseParams(R_C, Lorentzian(2.0, 1e10))
    (row,) = scan("c_s", [3000.0], noise, Linear(C_S))
    direct = lambda_eff(Lorentzian(2.0, 1e10), Linear(3000.0), R_C)
    assert row.lambda_eff == direct.value
    assert row.error == direct.error_estimate
    assert row.suppression == direct.value / 2.0
    assert row.rate_per_mass == heating_rate_per_mass(direct.value, PhysicalConstants(), R_C)


def test_scan_r_c_at_fixed_w_c():
    noise = NoiseParams(R_C, HardCutoff(1.0, cutoff_for(1.0)))
    rows = scan("r_c", np.geomspace(1e-8, 1e-6, 7), noise, Linear(C_S), hold_wc=True)
    for r in rows:
        assert r.suppression == pytest.approx(HARD_CUTOFF_SUPPRESSION[1.0], rel=1e-9)


def test_scan_order_independent_of_workers():
    noise = NoiseParams(R_C, ExpCutoff(1.0, 1e10))
    grid = np.linspace(1e-8, 1e-6, 9)
    assert scan("r_c", grid, noise, Linear(C_S)) == scan("r_c", grid, noise, Linear(C_S), workers=4)


def test_scan_records_row_failures():
    noise = NoiseParams(R_C, Lorentzian(1.0, 1e10))
    rows = scan("omega_c", [1e10, -1.0], noise, Linear(C_S))
    assert rows[0].ok and not rows[1].ok
    assert math.isnan(rows[1].lambda_eff)
    rows = scan("r_c", [R_C], noise, Linear(C_S), QuadratureOptions(rel_tol=1e-16, max_subdivisions=2))
    assert not rows[0].ok


def test_scan_validation():
    noise = NoiseParams(R_C, White(1.0))
    with pytest.raises(InvalidArgumentError):
        scan("mass", [1.0], noise, Linear(C_S))
    with pytest.raises(InvalidArgumentError):
        scan("r_c", [], noise, Linear(C_S))
    with pytest.raises(InvalidArgumentError):
        scan("r_c", [math.inf], noise, Linear(C_S))
