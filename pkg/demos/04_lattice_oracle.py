"""Checking the continuum formula against an explicit Brillouin-zone sum.

The golden-rule sum over a finite crystal carries all the physical constants.
They cancel, leaving a Riemann sum of the continuum integrand. Smooth spectra
converge fast. A hard cutoff samples a sphere on a cubic grid, and the
lattice-point count around its surface converges slowly and erratically.
"""

import math

from cslheat import HardCutoff, Linear, Lorentzian, MonatomicLattice, White, bz_sum_lambda_eff, lambda_eff

c_s, r_c = 5000.0, 1e-7
a = math.pi * r_c / 6.0  # zone edge at w = 6
m_si = 28.0855 * 1.66053906660e-27

spectra = {
    "white": White(1.0),
    "lorentzian w_c=1": Lorentzian(1.0, c_s / r_c),
    "hard w_c=3": HardCutoff(1.0, 3 * c_s / r_c),
    "hard w_c=1": HardCutoff(1.0, c_s / r_c),
}

for name, spec in spectra.items():
    cont = lambda_eff(spec, Linear(c_s), r_c).value
    errs = []
    for L in (16, 32, 64, 128):
        disc = bz_sum_lambda_eff(MonatomicLattice(a, L, m_si, Linear(c_s)), spec, r_c).value
        errs.append(abs(disc / cont - 1))
    print(f"{name:18s} " + "  ".join(f"L={L}: {e:.1e}" for L, e in zip((16, 32, 64, 128), errs)))
