"""n points on the radius 1 - gamma/n plus one extra point deeper inside.

The n ring points alone cannot sample P_n (n < n + 1 points, so A_n = 0).
With the extra point the family is a sampling family, and the lower constant
stays away from zero as n grows, even though z^n - 1 nearly vanishes on the
radial projection of the points.
"""

import numpy as np

from mzforge import Polynomial, SpaceKind, example27, in_boundary_annulus, sharp_bounds

gamma = 1.0
print(" n    ring A    A_full    B_full    (1/(n+1)) sum |z^n-1|^2 * n^3")
for n in (16, 32, 64, 128, 256):
    fam = example27(n, gamma, 1 / n**2)
    ring = fam.subset(in_boundary_annulus(fam.points, n, gamma))
    full = sharp_bounds(SpaceKind.HARDY, n, fam)
    proj = np.r_[np.exp(2j * np.pi * np.arange(n) / n), np.exp(2j * np.pi / n**2)]
    p = Polynomial(np.r_[-1.0, np.zeros(n - 1), 1.0])
    decay = np.sum(np.abs(p(proj)) ** 2) / (n + 1)
    print(f"{n:4d}  {sharp_bounds(SpaceKind.HARDY, n, ring).A:8.2g}  {full.A:8.4f}  {full.B:8.4f}  {decay * n**3:10.3f}")
