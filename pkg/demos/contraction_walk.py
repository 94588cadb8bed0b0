"""Walking a lifted family back to the circle by root reflection.

At each level the roots of p outside the disk are reflected inside, the
result is shrunk slightly, and every point moves to a thinner annulus. The
sampling sum never grows and the Hardy norm never drops below
exp(-8 gamma/3) times its start.
"""

import numpy as np

from mzforge import RadiiPolicy, contraction_iterate, lift_to_annulus, random_polynomial, torus_equispaced

n, gamma = 24, 0.6
fam = lift_to_annulus(torus_equispaced(n), gamma, RadiiPolicy("two-sided", seed=3))
p = random_polynomial(n, np.random.default_rng(3), roots_spread=3.0)
trace = contraction_iterate(fam, p, gamma, n, max_levels=12)

print("level  gamma_l     ||p_l||^2     sampling sum   max |1-|z||")
for lv in trace.levels:
    print(f"{lv.level:5d}  {lv.gamma:8.5f}  {lv.norm_sq:12.6g}  {lv.sampling_sum:12.6g}  {lv.max_radial_deviation:10.3g}")
print(f"final ||p_l||^2 / ||p||^2 = {trace.final_ratio:.4f}  (floor {trace.floor:.4f})")
