"""Two atoms per cell: the acoustic mode still moves the cell as a whole.

At k = 0 the acoustic polarisation is proportional to sqrt(m), the optical
mode leaves the centre of mass at rest, and the summed amplitude squared is
the cell mass. So the heating formula holds with m_A replaced by m_cell.
"""

import numpy as np

from cslheat import DiatomicCell, appendix_checks, diatomic_branches

cell = DiatomicCell(1.0, 2.0, 1.0)
br = diatomic_branches(cell, 0.0)
print("acoustic e(k=0):", np.round(br.e_acoustic.real, 6))
print("optical omega^2 at k=0:", br.omega_optical**2)
rep = appendix_checks(cell)
print(f"|C| = {rep.C_magnitude:.6f}, m_cell factor = {rep.m_cell_factor:.12f}")

print("\nacoustic branch approaches c_s k near the zone centre:")
for k in (1e-3, 1e-2, 1e-1):
    w = diatomic_branches(cell, k).omega_acoustic
    print(f"  k = {k:.0e}: omega / (c_s k) = {w / (cell.sound_speed * k):.8f}")

rng = np.random.default_rng(1)
worst = max(max(appendix_checks(DiatomicCell(*rng.uniform(0.1, 10, 2), 1.0)).residuals)
            for _ in range(100))
print(f"\nworst residual over 100 random mass pairs: {worst:.1e}")
