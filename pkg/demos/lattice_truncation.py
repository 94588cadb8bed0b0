"""Bergman sampling from a hyperbolic lattice cut off near the circle.

A dense ring lattice samples the whole Bergman space with some constant A.
Dropping the points in 1 - gamma/n <= |z| < 1, with gamma small enough for
A and the separation, leaves sampling families for P_n whose constants stay
comparable across n. For a sparse lattice A_n falls faster, and by n = 128
it has left the factor-4 band. This takes about a minute.
"""

from mzforge import SpaceKind, WeightPolicy, hyperbolic_lattice, make_family, separation, sharp_bounds, sweep
from mzforge import count_report, truncation_gamma

ns = [16, 32, 64, 128]
for af in (2.0, 0.5):
    lattice = hyperbolic_lattice(0.9, af, 1 - 1 / 256)
    A = sharp_bounds(SpaceKind.BERGMAN, 32, lattice, WeightPolicy.FULL_KERNEL_DIAG).A
    delta = separation(lattice.points)
    gamma = truncation_gamma(A, delta)
    print(f"angular factor {af}: A~{A:.4g} delta={delta:.4g} -> gamma={gamma:.4g}")
    fams = {n: make_family("bergman-truncated", n, s=0.9, angular_factor=af, gamma=gamma) for n in ns}
    res = sweep(SpaceKind.BERGMAN, fams.__getitem__, ns)
    for r in res.rows:
        c = count_report(fams[r.n], probes=2)
        print(f"  n={r.n:4d} points={r.count:7d} A_n={r.A:9.4g} B_n={r.B:9.4g} "
              f"bulk count={c.bulk_count_max} cell count={c.cell_count_max}")
    print(f"  spread_A={res.spread_A:.3f} verdict={res.verdict}")
