"""Sharp sampling constants of point families.

For an orthonormal basis ``e_k`` of ``P_n`` (``sqrt(k+1) z^k`` in the Bergman
space, ``z^k`` in the Hardy space) and a polynomial ``p = sum c_k e_k``::

    sum_l w_l |p(l)|^2 = c^* S c,     S = sum_l w_l conj(v_l) v_l^T,  v_l = (e_k(l))_k

so the best constants ``A_n, B_n`` in ``A ||p||^2 <= sum <= B ||p||^2`` are
the extreme eigenvalues of ``S``.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .cpoly import SpaceKind
from .geometry import PointFamily, annulus_probe_grid, in_boundary_annulus, in_bulk, probe_grid
from .kernels import kernel_diag, kernel_full_diag

CHUNK = 32768


class WeightPolicy(str, enum.Enum):
    KERNEL_DIAG = "kernel-diag"  # 1 / k_n(l, l)
    ONE_OVER_N = "one-over-n"  # 1 / n
    ONE_OVER_COUNT = "one-over-count"  # 1 / #points
    FULL_KERNEL_DIAG = "full-kernel-diag"  # 1 / k(l, l)


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("MZFORGE_THREADS", "1")))
    except ValueError:
        return 1


def sample_weights(space, n: int, family: PointFamily, policy) -> np.ndarray:
    space = SpaceKind.parse(space)
    policy = WeightPolicy(policy)
    pts = family.points
    if policy is WeightPolicy.KERNEL_DIAG:
        k = kernel_diag(space, n, pts)
        if np.any(k <= 0):
            raise ValueError("vanishing kernel diagonal")
        w = 1.0 / k
    elif policy is WeightPolicy.FULL_KERNEL_DIAG:
        if np.any(np.abs(pts) >= 1):
            raise ValueError("full-kernel weights need all points in the open disk")
        w = 1.0 / kernel_full_diag(space, pts)
    elif policy is WeightPolicy.ONE_OVER_N:
        if n < 1:
            raise ValueError("1/n weights need n >= 1")
        w = np.full(pts.size, 1.0 / n)
    else:
        w = np.full(pts.size, 1.0 / max(len(family.expanded()), 1))
    w = np.asarray(w, dtype=float) * family.weights
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ValueError("sample weights must be positive and finite")
    return w


def basis_matrix(space, n: int, pts: np.ndarray) -> np.ndarray:
    """Rows ``v_l = (e_0(l), ..., e_n(l))``."""
    return _basis_columns(space, n, pts).T


def _basis_columns(space, n: int, pts: np.ndarray) -> np.ndarray:
    # (n+1, m) layout: running powers are contiguous row updates
    space = SpaceKind.parse(space)
    z = np.asarray(pts, dtype=complex).ravel()
    Vt = np.empty((n + 1, z.size), dtype=complex)
    Vt[0] = 1.0
    for k in range(1, n + 1):
        np.multiply(Vt[k - 1], z, out=Vt[k])
    if space is SpaceKind.BERGMAN:
        Vt *= np.sqrt(np.arange(1, n + 2))[:, None]
    return Vt


def frame_matrix(space, n: int, family: PointFamily, policy=WeightPolicy.KERNEL_DIAG) -> np.ndarray:
    """Hermitian ``(n+1) x (n+1)`` matrix whose quadratic form is the weighted sampling sum."""
    if len(family) == 0:
        raise ValueError("empty family")
    w = sample_weights(space, n, family, policy)
    S = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(0, len(family), CHUNK):
        Vt = _basis_columns(space, n, family.points[i:i + CHUNK])
        S += (Vt.conj() * w[i:i + CHUNK]) @ Vt.T
    return 0.5 * (S + S.conj().T)


@dataclass
class FrameReport:
    n: int
    A: float
    B: float
    weight_policy: str
    space: str
    count: int
    rank_deficient: bool = False
    provenance: dict = field(default_factory=dict)
    witnesses: np.ndarray | None = field(default=None, repr=False)

    @property
    def condition(self) -> float:
        return self.B / self.A if self.A > 0 else math.inf

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("witnesses")
        d["condition"] = self.condition
        return d


def sharp_bounds(space, n: int, family: PointFamily, policy=WeightPolicy.KERNEL_DIAG,
                 witnesses: bool = False) -> FrameReport:
    """Extreme eigenvalues of the frame matrix.

    Fewer than ``n + 1`` distinct points cannot determine ``p in P_n``; ``A``
    is then reported as exactly ``0``. Otherwise ``A`` is the smallest
    eigenvalue clipped at zero. With ``witnesses=True`` the two eigenvectors
    (orthonormal-basis coefficients) are attached as columns.
    """
    space = SpaceKind.parse(space)
    policy = WeightPolicy(policy)
    S = frame_matrix(space, n, family, policy)
    evals, evecs = np.linalg.eigh(S)
    distinct = np.unique(np.round(family.points, 14)).size
    deficient = distinct < n + 1
    A = 0.0 if deficient else max(float(evals[0]), 0.0)
    return FrameReport(
        n=n, A=A, B=float(evals[-1]), weight_policy=policy.value, space=space.value,
        count=len(family.expanded()), rank_deficient=deficient,
        provenance=dict(family.provenance),
        witnesses=evecs[:, [0, -1]] if witnesses else None,
    )


def coefficients_from_basis(space, c: np.ndarray) -> np.ndarray:
    """Monomial coefficients of the polynomial ``sum c_k e_k``."""
    space = SpaceKind.parse(space)
    c = np.asarray(c, dtype=complex)
    if space is SpaceKind.BERGMAN:
        return c * np.sqrt(np.arange(1, c.size + 1))
    return c


@dataclass
class SweepResult:
    rows: list[FrameReport]
    spread_A: float
    spread_B: float
    min_A: float
    spread_factor: float
    floor: float

    @property
    def verdict(self) -> bool:
        return (self.spread_A <= self.spread_factor and self.spread_B <= self.spread_factor
                and self.min_A >= self.floor)

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "spread_A": self.spread_A, "spread_B": self.spread_B, "min_A": self.min_A,
            "spread_factor": self.spread_factor, "floor": self.floor, "verdict": self.verdict,
        }


def _spread(x: np.ndarray) -> float:
    if x.size == 0:
        return 1.0
    lo = float(x.min())
    return float(x.max()) / lo if lo > 0 else math.inf


def sweep(space, generator: Callable[[int], PointFamily], n_list: Sequence[int],
          policy=WeightPolicy.KERNEL_DIAG, spread_factor: float = 4.0, floor: float = 1e-6) -> SweepResult:
    """Sharp bounds of ``generator(n)`` for each ``n``.

    The verdict holds when ``max A / min A`` and ``max B / min B`` are both at
    most ``spread_factor`` and ``min A >= floor``.
    """
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ValueError("n_list must be nonempty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")

    def one(n):
        return sharp_bounds(space, n, generator(n), policy)

    workers = max_workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            rows = list(ex.map(one, n_list))
    else:
        rows = [one(n) for n in n_list]
    A = np.array([r.A for r in rows])
    B = np.array([r.B for r in rows])
    return SweepResult(rows, _spread(A), _spread(B), float(A.min()), spread_factor, floor)


# ---------------------------------------------------------------------------
# Carleson-type check for the Bergman sampling measure


@dataclass
class CarlesonReport:
    n: int
    gamma: float
    C_bulk: float  # max mu_n(B(z, (1-|z|^2)/2)) / (1-|z|^2)^2 over bulk probes
    C_annulus: float  # max n^2 mu_n(B(z, 1/n)) over annulus probes
    ceiling: float

    @property
    def C(self) -> float:
        return max(self.C_bulk, self.C_annulus)

    @property
    def ok(self) -> bool:
        return self.C <= self.ceiling

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(C=self.C, ok=self.ok)
        return d


def carleson_check(family: PointFamily, gamma: float | None = None, n: int | None = None,
                   ceiling: float = 10.0, probes: int = 4) -> CarlesonReport:
    """Empirical Carleson constant of ``mu_n = sum delta_l / k_n(l, l)`` (Bergman).

    Probe centers are the sample points plus quasi-uniform grids, so the
    returned constants are lower bounds on the suprema.
    """
    n = family.n if n is None else n
    gamma = family.gamma if gamma is None else gamma
    if n is None or gamma is None:
        raise ValueError("carleson_check needs n and gamma")
    if not (gamma > 0 and n > 2 * gamma):
        raise ValueError(f"need gamma > 0 and n > 2 gamma (n={n}, gamma={gamma})")
    pts = family.points
    if pts.size == 0:
        return CarlesonReport(n, gamma, 0.0, 0.0, ceiling)
    mass = family.weights / kernel_diag(SpaceKind.BERGMAN, n, pts)
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    rho = 1 - gamma / n

    def measure(centers, radii):
        if centers.size == 0:
            return np.zeros(0)
        idx = tree.query_ball_point(np.column_stack([centers.real, centers.imag]), radii)
        return np.array([mass[i].sum() if i else 0.0 for i in idx])

    bulk = np.concatenate([pts[in_bulk(pts, n, gamma)], probe_grid(rho * (1 - 1e-15), probes)])
    bulk = bulk[in_bulk(bulk, n, gamma)]
    s = 1 - np.abs(bulk) ** 2
    cb = measure(bulk, 0.5 * s * (1 - 1e-12)) / s**2
    ann = np.concatenate([pts[in_boundary_annulus(pts, n, gamma)], annulus_probe_grid(n, gamma, 1.0, probes)])
    ca = measure(ann, (1 - 1e-12) / n) * n**2
    return CarlesonReport(n, gamma, float(cb.max()) if cb.size else 0.0,
                          float(ca.max()) if ca.size else 0.0, ceiling)


# ---------------------------------------------------------------------------
# Bergman truncation parameter


def truncation_gamma(A: float, delta: float, n_min: int | None = None, tol: float = 1e-12) -> float:
    """Largest ``gamma`` with ``1 - (1 - (1+delta) gamma/n)^(2n+2) <= A delta^2 / 8`` for all integers ``n > 2 gamma``.

    The left side decreases in ``n``, so only the smallest admissible ``n``
    matters; ``n_min`` optionally raises that smallest degree.
    """
    if not (A > 0 and 0 < delta < 1):
        raise ValueError("need A > 0 and 0 < delta < 1")
    target = A * delta**2 / 8
    if target >= 1:
        target = 1 - 1e-16

    def worst(g):
        n0 = math.floor(2 * g) + 1
        if n_min is not None:
            n0 = max(n0, n_min)
        ns = np.arange(n0, n0 + 64)
        x = 1 - (1 + delta) * g / ns
        if np.any(x <= 0):
            return math.inf
        return float(np.max(-np.expm1((2 * ns + 2) * np.log(x))))

    # the smallest admissible n jumps at half-integers, so scan to the first failure before bisecting
    step = 1.0 / 256
    lo, hi = 0.0, step
    while worst(hi) <= target:
        lo, hi = hi, hi + step
        if hi > 64:
            return lo
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if worst(mid) <= target:
            lo = mid
        else:
            hi = mid
    return lo
