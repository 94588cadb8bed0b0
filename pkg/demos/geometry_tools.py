"""Pseudohyperbolic geometry helpers: separation, splitting into separated
classes, local counts and truncated Hausdorff distance."""

import numpy as np

from mzforge import PointFamily, count_report, hausdorff_ladder, hyperbolic_lattice, pseudo_dist
from mzforge import separation, separation_decompose

print("d(0.5, -0.5) =", pseudo_dist(0.5, -0.5))

lat = hyperbolic_lattice(0.8, 1.0, 0.99)
print(f"lattice: {len(lat)} points, separation {separation(lat.points):.4f}")

rng = np.random.default_rng(0)
cloud = PointFamily(0.98 * np.sqrt(rng.uniform(0, 1, 400)) * np.exp(2j * np.pi * rng.uniform(0, 1, 400)))
K, labels = separation_decompose(cloud, 0.2)
print(f"random cloud splits into {K} classes, each 0.2-separated")

fam = PointFamily(lat.points, n=32, gamma=1.0)
rep = count_report(fam)
print(f"bulk count max {rep.bulk_count_max}, annulus count {rep.annulus_count}, cell count max {rep.cell_count_max}")

jittered = lat.points * np.exp(1j * 1e-3 * rng.standard_normal(len(lat)))
print("Hausdorff ladder to a jittered copy:", hausdorff_ladder(lat.points, jittered))
