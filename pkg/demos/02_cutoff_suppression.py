"""How much a low-frequency cutoff suppresses heating.

For a linear branch the suppression factor depends only on
w_c = Omega_c r_c / c_s. The hard cutoff has a closed form to compare with.
"""

import math

import numpy as np

from cslheat import ExpCutoff, HardCutoff, Linear, Lorentzian, suppression_factor

c_s, r_c = 5000.0, 1e-7


def hard_closed_form(w):
    return math.erf(w) - 8 / (3 * math.sqrt(math.pi)) * math.exp(-w * w) * (w**3 / 2 + 3 * w / 4)


print(f"{'w_c':>6} {'hard':>12} {'closed form':>12} {'exp':>12} {'lorentzian':>12}")
for w_c in np.geomspace(0.1, 5.0, 9):
    omega_c = w_c * c_s / r_c
    row = [suppression_factor(fam(1.0, omega_c), Linear(c_s), r_c)
           for fam in (HardCutoff, ExpCutoff, Lorentzian)]
    print(f"{w_c:6.3f} {row[0]:12.4e} {hard_closed_form(w_c):12.4e} {row[1]:12.4e} {row[2]:12.4e}")

# the soft tails of the exponential and Lorentzian forms leak far more
# high-frequency noise than the hard cutoff does, so they suppress less
