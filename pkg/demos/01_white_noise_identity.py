"""White noise heats at the standard rate, whatever the phonon branch looks like.

The radial weight integrates to one, so a flat spectrum gives lambda_eff equal
to its amplitude for any dispersion and correlation length.
"""

from cslheat import DebyeCapped, Linear, PhysicalConstants, SineBand, White, heating_rate_per_mass, lambda_eff

branches = {
    "linear, c_s = 5 km/s": Linear(5000.0),
    "Debye-capped at 2e10 rad/s": DebyeCapped(5000.0, 2e10),
    "sine band, edge 2e7 rad/m": SineBand(6e10, 2e7),
}

for r_c in (1e-8, 1e-7, 1e-6):
    for label, disp in branches.items():
        res = lambda_eff(White(1.0), disp, r_c)
        print(f"r_c = {r_c:.0e} m  {label:28s} lambda_eff = {res.value:.15f} s^-1")

rate = heating_rate_per_mass(1.0, PhysicalConstants(), 1e-7)
print(f"\nper-mass heating at lambda = 1 s^-1, r_c = 1e-7 m: {rate:.6f} W/kg")
