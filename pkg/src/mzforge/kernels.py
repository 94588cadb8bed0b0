"""Reproducing kernels of ``P_n`` and of the full spaces ``A^2`` and ``H^2``.

With ``u = z * conj(w)``::

    Bergman  k_n = sum_{k<=n} (k+1) u^k = (1 + (n+1) u^(n+2) - (n+2) u^(n+1)) / (1-u)^2
             k   = 1 / (1-u)^2
    Hardy    k_n = sum_{k<=n} u^k       = (1 - u^(n+1)) / (1-u)
             k   = 1 / (1-u)

The closed forms are evaluated through ``expm1``/``log1p`` of ``(n+1) log u``,
which removes most of the cancellation near ``u = 1``. Within ``TAU`` of the
diagonal singularity the finite sum is used instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from .cpoly import Polynomial, SpaceKind

TAU = 1e-4


class Regime(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    DIRECT_SUM = "direct_sum"


def _clog1p(z):
    """Complex ``log(1 + z)`` accurate for small ``|z|`` (numpy's is not)."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    with np.errstate(divide="ignore"):
        re = 0.5 * np.log1p(x * (2.0 + x) + y * y)
    return re + 1j * np.arctan2(y, 1.0 + x)


def _direct_sum(space: SpaceKind, n: int, u):
    u = np.asarray(u, dtype=complex)
    out = np.full(u.shape, (n + 1) if space is SpaceKind.BERGMAN else 1, dtype=complex)
    for k in range(n - 1, -1, -1):
        out = out * u + ((k + 1) if space is SpaceKind.BERGMAN else 1)
    return out


def _closed_form(space: SpaceKind, n: int, u):
    u = np.asarray(u, dtype=complex)
    d = 1.0 - u
    out = np.empty(u.shape, dtype=complex)
    small = np.abs(u) < 0.5
    us, ds = u[small], d[small]
    if space is SpaceKind.HARDY:
        out[small] = (1.0 - us ** (n + 1)) / ds
    else:
        out[small] = (1.0 + (n + 1) * us ** (n + 2) - (n + 2) * us ** (n + 1)) / ds**2
    dl = d[~small]
    x = (n + 1) * _clog1p(-dl)  # x = (n+1) log u
    if space is SpaceKind.HARDY:
        out[~small] = -np.expm1(x) / dl
    else:
        # numerator = -(u^(n+1) - 1) - (n+1) (1-u) u^(n+1)
        out[~small] = (-np.expm1(x) - (n + 1) * dl * np.exp(x)) / dl**2
    return out


def kernel_full(space, z, w):
    """Reproducing kernel of the full space; requires ``|z conj(w)| < 1``."""
    space = SpaceKind.parse(space)
    u = np.asarray(z, dtype=complex) * np.conj(np.asarray(w, dtype=complex))
    if np.any(np.abs(u) >= 1):
        raise ValueError("full kernel is defined only for |z * conj(w)| < 1")
    d = 1.0 - u
    out = 1.0 / d**2 if space is SpaceKind.BERGMAN else 1.0 / d
    return out if out.ndim else complex(out)


def kernel_trunc(space, n: int, z, w, tau: float | None = None, return_regime: bool = False):
    """Reproducing kernel ``k_n(z, w)`` of ``P_n``; valid for all finite ``z, w``.

    With ``return_regime=True`` also returns a boolean array that is true where
    the direct sum was used.
    """
    space = SpaceKind.parse(space)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    tau = TAU if tau is None else tau
    u = np.asarray(z, dtype=complex) * np.conj(np.asarray(w, dtype=complex))
    shape = u.shape
    u = u.reshape(-1)
    direct = np.abs(1.0 - u) < tau
    if n == 0:
        direct[:] = True
    out = np.empty(u.shape, dtype=complex)
    if direct.any():
        out[direct] = _direct_sum(space, n, u[direct])
    if (~direct).any():
        out[~direct] = _closed_form(space, n, u[~direct])
    out = out.reshape(shape)
    direct = direct.reshape(shape)
    if not shape:
        out, direct = complex(out), bool(direct)
    return (out, direct) if return_regime else out


def kernel_diag(space, n: int, z):
    """``k_n(z, z)`` as a real array."""
    z = np.asarray(z, dtype=complex)
    v = np.asarray(np.real(kernel_trunc(space, n, z, z)))
    return v if v.ndim else float(v)


def kernel_full_diag(space, z):
    z = np.asarray(z, dtype=complex)
    v = np.asarray(np.real(kernel_full(space, z, z)))
    return v if v.ndim else float(v)


def kernel_normalized(space, n: int, z, w):
    """``kappa_n(z, w) = k_n(z, w) / sqrt(k_n(w, w))``."""
    kw = np.asarray(kernel_diag(space, n, w))
    if np.any(kw <= 0):
        raise ValueError("vanishing diagonal kernel")
    out = kernel_trunc(space, n, z, w) / np.sqrt(kw)
    return out


def kernel_polynomial(space, n: int, w: complex, normalized: bool = False) -> Polynomial:
    """The polynomial ``z -> k_n(z, w)`` (or its normalized version) in ``P_n``."""
    space = SpaceKind.parse(space)
    k = np.arange(n + 1)
    c = np.conj(w) ** k * ((k + 1) if space is SpaceKind.BERGMAN else 1.0)
    if normalized:
        c = c / math.sqrt(kernel_diag(space, n, w))
    return Polynomial(c, n)


def inner(p: Polynomial, q: Polynomial, space) -> complex:
    """Space inner product ``<p, q>`` computed from coefficients."""
    space = SpaceKind.parse(space)
    m = max(p.coeffs.size, q.coeffs.size)
    a = np.zeros(m, dtype=complex)
    b = np.zeros(m, dtype=complex)
    a[: p.coeffs.size] = p.coeffs
    b[: q.coeffs.size] = q.coeffs
    wts = 1.0 / np.arange(1, m + 1) if space is SpaceKind.BERGMAN else np.ones(m)
    return complex(np.sum(a * np.conj(b) * wts))


# ---------------------------------------------------------------------------
# kernel comparison checks


def c_gamma(gamma: float) -> float:
    """Bulk comparison constant ``1 - exp(-2 gamma) (1 + 2 gamma)``."""
    return 1.0 - math.exp(-2.0 * gamma) * (1.0 + 2.0 * gamma)


@dataclass
class KernelBoundReport:
    bound: str
    region: str
    space: str
    n: int
    gamma: float
    lower_const: float
    upper_const: float
    lower_ok: bool
    upper_ok: bool
    lower_ratio: float  # min over grid of value / lower bound (>= 1 passes)
    lower_witness: complex
    upper_ratio: float  # max over grid of value / upper bound (<= 1 passes)
    upper_witness: complex
    note: str = ""
    violations: int = 0  # grid points outside either bound

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok

    @property
    def worst_ratio(self) -> float:
        return max(self.upper_ratio, 1.0 / self.lower_ratio if self.lower_ratio > 0 else math.inf)

    @property
    def witness(self) -> complex:
        if self.lower_ratio > 0 and 1.0 / self.lower_ratio >= self.upper_ratio:
            return self.lower_witness
        return self.upper_witness

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("lower_witness", "upper_witness"):
            d[key] = [d[key].real, d[key].imag]
        d["ok"] = self.ok
        d["worst_ratio"] = self.worst_ratio
        return d


def _polar_grid(r0: float, r1: float, density: int) -> np.ndarray:
    r = np.linspace(r0, r1, density)
    t = 2 * np.pi * np.arange(density) / density
    return (r[:, None] * np.exp(1j * t)[None, :]).ravel()


def _ratio_report(bound, region, space, n, gamma, z, value, lower, upper, lo_c, up_c, rtol=1e-12, note=""):
    lr = value / lower
    ur = value / upper
    i, j = int(np.argmin(lr)), int(np.argmax(ur))
    return KernelBoundReport(
        bound=bound, region=region, space=space.value, n=n, gamma=gamma,
        lower_const=lo_c, upper_const=up_c,
        lower_ok=bool(lr[i] >= 1 - rtol), upper_ok=bool(ur[j] <= 1 + rtol),
        lower_ratio=float(lr[i]), lower_witness=complex(z[i]),
        upper_ratio=float(ur[j]), upper_witness=complex(z[j]), note=note,
        violations=int(np.count_nonzero((lr < 1 - rtol) | (ur > 1 + rtol))),
    )


def check_kernel_bounds(space, n: int, gamma: float, grid_density: int = 64) -> list[KernelBoundReport]:
    """Evaluate the diagonal kernel comparison bounds on polar grids.

    Bergman: ``c_gamma k <= k_n <= k`` on ``|z| <= 1 - gamma/n`` and
    ``exp(-4 gamma) n^2 / 4 <= k_n <= n^2`` on ``1 - gamma/n <= |z| <= 1``.

    Hardy: ``(1 - exp(-2 gamma)) n / (2 gamma) <= k_n <= exp(4 gamma) n / gamma``
    on the two-sided annulus ``1 - gamma/n <= |z| <= (1 - gamma/n)^-1``. The
    report's ``note`` records whether the larger lower constant
    ``(1 - exp(-4 gamma)) / (2 gamma)`` also holds.
    """
    space = SpaceKind.parse(space)
    if not gamma > 0:
        raise ValueError("precondition violated: gamma > 0")
    if not n > max(2 * gamma, 3):
        raise ValueError(f"precondition violated: n > max(2*gamma, 3) (n={n}, gamma={gamma})")
    rho = 1.0 - gamma / n
    reports = []
    if space is SpaceKind.BERGMAN:
        z = _polar_grid(0.0, rho, grid_density)
        kn = kernel_diag(space, n, z)
        k = kernel_full_diag(space, z)
        cg = c_gamma(gamma)
        reports.append(_ratio_report("wei1-bulk", "bulk", space, n, gamma, z, kn, cg * k, k, cg, 1.0))
        z = _polar_grid(rho, 1.0, grid_density)
        kn = kernel_diag(space, n, z)
        lo = math.exp(-4 * gamma) / 4 * n**2
        reports.append(_ratio_report("wei1-annulus", "annulus", space, n, gamma, z, kn,
                                     np.full(z.shape, lo), np.full(z.shape, float(n**2)),
                                     math.exp(-4 * gamma) / 4, 1.0))
    else:
        z = _polar_grid(rho, 1.0 / rho, grid_density)
        kn = kernel_diag(space, n, z)
        lo_proof = (1 - math.exp(-2 * gamma)) / (2 * gamma)
        lo_stated = (1 - math.exp(-4 * gamma)) / (2 * gamma)
        up = math.exp(4 * gamma) / gamma
        stated_ok = bool(np.min(kn) >= lo_stated * n * (1 - 1e-12))
        reports.append(_ratio_report(
            "xei1", "two_sided_annulus", space, n, gamma, z, kn,
            np.full(z.shape, lo_proof * n), np.full(z.shape, up * n), lo_proof, up,
            note=f"stated lower constant (1-exp(-4g))/(2g)={lo_stated:.6g} holds: {stated_ok}",
        ))
    return reports


def find_n_gamma(gamma: float, grid_density: int = 64, n_max: int = 256) -> int:
    """Smallest ``n0`` such that the bulk bound ``c_gamma k <= k_n`` holds for every ``n0 <= n <= n_max``."""
    n_min = int(math.floor(max(2 * gamma, 3))) + 1
    n0 = n_max + 1
    for n in range(n_max, n_min - 1, -1):
        rep = check_kernel_bounds(SpaceKind.BERGMAN, n, gamma, grid_density)[0]
        if not rep.lower_ok:
            break
        n0 = n
    return n0


@dataclass
class NearDiagonalReport:
    n: int
    gamma0: float
    lower_const: float
    upper_const: float
    scaled_min: float  # min (1 - |w|^2) |kappa_n(z, w)|
    scaled_max: float
    ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def check_near_diagonal(n: int, gamma0: float = 3.0, grid_density: int = 24,
                        lower: float = 0.25, upper: float = 2.25) -> NearDiagonalReport:
    """Bergman normalized kernel near the diagonal in the bulk.

    For ``|w| <= 1 - gamma0/n`` and ``|z - w| <= (1 - |w|^2)/2`` the scaled
    value ``(1 - |w|^2) |kappa_n(z, w)|`` is compared with ``[lower, upper]``.
    """
    if n <= gamma0:
        raise ValueError("precondition violated: n > gamma0")
    w = _polar_grid(0.0, 1 - gamma0 / n, grid_density)
    t = np.exp(2j * np.pi * np.arange(grid_density) / grid_density)
    s = np.linspace(0, 1, 5)
    off = (s[:, None] * t[None, :]).ravel()
    rad = 0.5 * (1 - np.abs(w) ** 2)
    z = w[:, None] + rad[:, None] * off[None, :]
    kap = np.abs(kernel_normalized(SpaceKind.BERGMAN, n, z, w[:, None]))
    scaled = (1 - np.abs(w[:, None]) ** 2) * kap
    lo, hi = float(scaled.min()), float(scaled.max())
    return NearDiagonalReport(n, gamma0, lower, upper, lo, hi, bool(lo >= lower and hi <= upper))


def near_diagonal_annulus_constant(n: int, gamma: float, eps: float, grid_density: int = 24) -> float:
    """Smallest ``K`` with ``n/K <= |kappa_n(z, w)| <= K n`` on ``w`` in the annulus, ``|z - w| < eps/n``."""
    w = _polar_grid(1 - gamma / n, 1.0, grid_density)
    t = np.exp(2j * np.pi * np.arange(grid_density) / grid_density)
    s = np.linspace(0, 1, 5)
    z = w[:, None] + (eps / n) * (s[:, None] * t[None, :]).ravel()[None, :]
    r = np.abs(kernel_normalized(SpaceKind.BERGMAN, n, z, w[:, None])) / n
    return float(max(r.max(), 1.0 / r.min()))
