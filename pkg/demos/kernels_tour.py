"""How the truncated kernel k_n(z, z) compares with the full kernel.

Inside |z| <= 1 - gamma/n the two are comparable; past that radius k_n
saturates at order n^2 (Bergman) or n (Hardy) while k blows up.
"""

import numpy as np

from mzforge import SpaceKind, c_gamma, check_kernel_bounds, find_n_gamma, kernel_diag, kernel_full_diag

n, gamma = 64, 1.0
rho = 1 - gamma / n

print(f"Bergman, n={n}: k_n/k along the positive axis")
for r in (0.0, 0.5, 0.9, rho, 0.999):
    kn = kernel_diag(SpaceKind.BERGMAN, n, r)
    k = kernel_full_diag(SpaceKind.BERGMAN, r)
    print(f"  r={r:.4f}  k_n={float(kn):12.4f}  k={float(k):14.4f}  ratio={float(kn / k):.4f}")

print(f"\nc_gamma at gamma={gamma}: {c_gamma(gamma):.5f}")
print(f"smallest n with c_gamma k <= k_n on the 64x64 bulk grid: {find_n_gamma(gamma, 64, 256)}")

bulk, ann = check_kernel_bounds(SpaceKind.BERGMAN, n, gamma, 64)
print(f"bulk:    min k_n/(c k) = {bulk.lower_ratio:.4f}, max k_n/k = {bulk.upper_ratio:.4f}")
print(f"annulus: min k_n/(e^-4g n^2/4) = {ann.lower_ratio:.4f}, max k_n/n^2 = {ann.upper_ratio:.4f}")

(hardy,) = check_kernel_bounds(SpaceKind.HARDY, n, gamma, 64)
print(f"Hardy two-sided annulus ok: {hardy.ok}; {hardy.note}")

# on the circle the Hardy kernel is exactly n + 1, evaluated through the direct-sum branch
z = np.exp(1j * np.linspace(0, 2 * np.pi, 5))
print("Hardy k_n on the circle:", np.round(kernel_diag(SpaceKind.HARDY, n, z), 12))
