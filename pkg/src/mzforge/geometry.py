"""Point families in the disk and their geometry.

Pseudohyperbolic distance ``d(z, w) = |z - w| / |1 - z conj(w)|``, region
classification relative to ``1 - gamma/n``, separation and coloring of point
sets, local counting functionals, projection to the circle, and truncated
Hausdorff distances for weak-limit diagnostics.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

ANGLE_TOL = 1e-12
# radii within a few ulps below 1 - gamma/n belong to the boundary annulus;
# rho * e^{it} is not always exactly of modulus rho in floating point
EDGE_RTOL = 8 * np.finfo(float).eps


@dataclass(eq=False)
class PointFamily:
    """Finite multiset of sample points for degree ``n``.

    ``multiplicity`` (optional) gives a positive integer count per point.
    ``provenance`` records how the family was produced.
    """

    points: np.ndarray
    n: int | None = None
    gamma: float | None = None
    multiplicity: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.atleast_1d(np.asarray(self.points, dtype=complex)).ravel()
        if not np.all(np.isfinite(self.points)):
            raise ValueError("sample points must be finite")
        if self.multiplicity is not None:
            m = np.asarray(self.multiplicity, dtype=int).ravel()
            if m.shape != self.points.shape or np.any(m < 1):
                raise ValueError("multiplicities must be positive and match the points")
            self.multiplicity = m

    def __len__(self):
        return self.points.size

    @property
    def weights(self) -> np.ndarray:
        """Per-point multiplicities (ones when unset)."""
        if self.multiplicity is None:
            return np.ones(self.points.size, dtype=int)
        return self.multiplicity

    def expanded(self) -> np.ndarray:
        """Points repeated according to their multiplicity."""
        return np.repeat(self.points, self.weights)

    def with_points(self, points, **changes) -> "PointFamily":
        kw = dict(n=self.n, gamma=self.gamma, multiplicity=None, provenance=dict(self.provenance))
        kw.update(changes)
        return PointFamily(points, **kw)

    def subset(self, mask, **changes) -> "PointFamily":
        mult = None if self.multiplicity is None else self.multiplicity[mask]
        return self.with_points(self.points[mask], multiplicity=mult, **changes)

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "gamma": self.gamma,
            "points": [[float(z.real), float(z.imag)] for z in self.points],
        }
        if self.multiplicity is not None:
            d["multiplicities"] = [int(m) for m in self.multiplicity]
        if self.provenance:
            d["provenance"] = self.provenance
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PointFamily":
        pts = np.array([complex(re, im) for re, im in d.get("points", [])], dtype=complex)
        return cls(pts, n=d.get("n"), gamma=d.get("gamma"),
                   multiplicity=d.get("multiplicities"), provenance=d.get("provenance", {}))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "PointFamily":
        return cls.from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# metric


def _check_disk(*zs):
    for z in zs:
        if np.any(np.abs(z) >= 1):
            raise ValueError("pseudohyperbolic distance needs points in the open unit disk")


def pseudo_dist(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    _check_disk(z, w)
    d = np.abs(z - w) / np.abs(1 - z * np.conj(w))
    return d if d.ndim else float(d)


def in_pseudo_disk(z, w, rho):
    """Membership in the hyperbolic disk ``d(z, w) < rho``."""
    return np.asarray(pseudo_dist(z, w)) < rho


def in_inner_euclidean_disk(z, w, rho):
    """``|z - w| < rho/(1+rho) (1 - |w|^2)``; implies ``d(z, w) < rho``."""
    return np.abs(np.asarray(z) - w) < rho / (1 + rho) * (1 - np.abs(w) ** 2)


def in_outer_euclidean_disk(z, w, rho):
    """``|z - w| < rho/(1-rho) (1 - |w|^2)``; contains the hyperbolic disk when ``rho < 1/2``."""
    if not np.all(np.asarray(rho) < 0.5):
        raise ValueError("the outer inclusion is only valid for rho < 1/2")
    return np.abs(np.asarray(z) - w) < rho / (1 - rho) * (1 - np.abs(w) ** 2)


# ---------------------------------------------------------------------------
# regions


class Region(str, enum.Enum):
    BULK = "bulk"
    BOUNDARY_ANNULUS = "boundary_annulus"
    TWO_SIDED_ANNULUS = "two_sided_annulus"
    EXTERIOR = "exterior"
    INVALID = "invalid"


def _check_n_gamma(n, gamma):
    if not (gamma > 0 and n > gamma):
        raise ValueError(f"need n > gamma > 0 (n={n}, gamma={gamma})")


def classify_region(z, n: int, gamma: float):
    """Most specific region of each point.

    ``|z| < 1 - g/n`` bulk; ``1 - g/n <= |z| < 1`` boundary annulus (the
    inner edge carries a relative slack of ``EDGE_RTOL``);
    ``1 <= |z| <= (1 - g/n)^-1`` remaining part of the two-sided annulus;
    beyond that exterior. Non-finite input is invalid.
    """
    _check_n_gamma(n, gamma)
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    rho = 1 - gamma / n
    codes = np.select(
        [~np.isfinite(z), r < rho * (1 - EDGE_RTOL), r < 1, r <= 1 / rho],
        [4, 0, 1, 2],
        default=3,
    )
    order = [Region.BULK, Region.BOUNDARY_ANNULUS, Region.TWO_SIDED_ANNULUS, Region.EXTERIOR, Region.INVALID]
    if codes.ndim == 0:
        return order[int(codes)]
    return np.array([order[c] for c in codes.ravel()], dtype=object).reshape(codes.shape)


def in_bulk(z, n, gamma):
    return np.abs(z) < (1 - gamma / n) * (1 - EDGE_RTOL)


def in_boundary_annulus(z, n, gamma):
    r = np.abs(z)
    return (r >= (1 - gamma / n) * (1 - EDGE_RTOL)) & (r < 1)


def in_two_sided_annulus(z, n, gamma, rtol: float = 0.0):
    r = np.abs(z)
    rho = 1 - gamma / n
    return (r >= rho * (1 - rtol)) & (r <= (1 + rtol) / rho)


# ---------------------------------------------------------------------------
# separation


def _close_pairs(pts: np.ndarray, delta: float, strict: bool = True):
    """Index pairs ``i < j`` with pseudohyperbolic distance below ``delta``."""
    if pts.size < 2:
        return np.empty(0, int), np.empty(0, int), np.empty(0)
    _check_disk(pts)
    xy = np.column_stack([pts.real, pts.imag])
    tree = cKDTree(xy)
    # d(z, w) < delta forces |z - w| < delta (1 - |w|^2) / (1 - delta)
    radii = delta * (1 - np.abs(pts) ** 2) / (1 - delta) * (1 + 1e-12)
    nbrs = tree.query_ball_point(xy, radii)
    ii = np.repeat(np.arange(pts.size), [len(b) for b in nbrs])
    jj = np.fromiter((j for b in nbrs for j in b), dtype=int, count=ii.size)
    keep = ii < jj
    ii, jj = ii[keep], jj[keep]
    d = np.abs(pts[ii] - pts[jj]) / np.abs(1 - pts[ii] * np.conj(pts[jj]))
    sel = d < delta if strict else d <= delta
    return ii[sel], jj[sel], d[sel]


def separation(points) -> float:
    """Minimum pairwise pseudohyperbolic distance (``nan`` for fewer than two points)."""
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size < 2:
        return math.nan
    _check_disk(pts)
    xy = np.column_stack([pts.real, pts.imag])
    _, idx = cKDTree(xy).query(xy, k=2)
    j = idx[:, 1]
    ub = float(np.min(np.abs(pts - pts[j]) / np.abs(1 - pts * np.conj(pts[j]))))
    if ub == 0.0:
        return 0.0
    if ub >= 1.0:
        return ub
    _, _, d = _close_pairs(pts, ub, strict=False)
    return float(d.min()) if d.size else ub


def separation_decompose(family, delta: float):
    """Split the points into classes that are each ``delta``-separated.

    Greedy coloring (largest degree first) of the graph joining points at
    pseudohyperbolic distance below ``delta``. Returns ``(K, labels)``; the
    family is ``delta``-separated iff ``K == 1``. Multiplicities are expanded
    first, so a point of multiplicity ``m`` forces ``K >= m``.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    pts = family.expanded() if isinstance(family, PointFamily) else np.asarray(family, dtype=complex).ravel()
    if pts.size == 0:
        return 0, np.empty(0, dtype=int)
    ii, jj, _ = _close_pairs(pts, delta)
    g = nx.Graph()
    g.add_nodes_from(range(pts.size))
    g.add_edges_from(zip(ii.tolist(), jj.tolist()))
    coloring = nx.greedy_color(g, strategy="largest_first")
    labels = np.array([coloring[i] for i in range(pts.size)], dtype=int)
    return int(labels.max()) + 1, labels


def euclidean_ball_separation(points) -> float:
    """Largest ``delta <= 1`` for which the disks ``B(l, delta (1 - |l|))`` are pairwise disjoint."""
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size < 2:
        return 1.0
    a = 1 - np.abs(pts)
    if np.any(a <= 0):
        raise ValueError("points must lie in the open unit disk")
    xy = np.column_stack([pts.real, pts.imag])
    tree = cKDTree(xy)
    _, idx = tree.query(xy, k=2)
    j = idx[:, 1]
    t = float(min(1.0, np.min(np.abs(pts - pts[j]) / (a + a[j]))))
    if t == 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    # a pair with ratio < t satisfies |l - m| < 2 t a_l / (1 - t) for the point with smaller a
    nbrs = tree.query_ball_point(xy, 2 * t * a / (1 - t) * (1 + 1e-12))
    best = t
    for i, b in enumerate(nbrs):
        b = np.asarray([k for k in b if k != i], dtype=int)
        if b.size:
            best = min(best, float(np.min(np.abs(pts[i] - pts[b]) / (a[i] + a[b]))))
    return best


# ---------------------------------------------------------------------------
# counting


@dataclass
class GeometryReport:
    K: int
    delta: float
    bulk_count_max: int
    annulus_count: int
    cell_count_max: int
    eps: float
    n: int
    gamma: float
    total_count: int
    n_probes: int
    note: str = "probe maxima are lower bounds on the suprema over all centers"

    def to_dict(self) -> dict:
        return asdict(self)


def probe_grid(r_max: float, density: int = 4) -> np.ndarray:
    """Hyperbolically quasi-uniform grid in ``|z| <= r_max``.

    Rings at ``1 - r = q^j`` with ``q = 1 - 1/(2 density)`` and about
    ``2 pi density r / (1 - r)`` points per ring.
    """
    q = 1 - 1 / (2 * density)
    out = [np.zeros(1, dtype=complex)]
    j = 1
    while True:
        r = 1 - q**j
        if r > r_max:
            break
        m = int(math.ceil(2 * math.pi * density * r / (1 - r)))
        out.append(r * np.exp(2j * np.pi * (np.arange(m) + 0.5 * (j % 2)) / m))
        j += 1
    if r_max > 0:
        m = int(math.ceil(2 * math.pi * density * r_max / (1 - r_max))) if r_max < 1 else 1
        out.append(r_max * np.exp(2j * np.pi * np.arange(m) / m))
    return np.concatenate(out)


def annulus_probe_grid(n: int, gamma: float, eps: float, density: int = 4) -> np.ndarray:
    """Grid in ``1 - gamma/n <= |z| < 1`` with spacing about ``eps / (density n)``."""
    h = eps / (density * n)
    radii = np.arange(1 - gamma / n, 1, h)
    m = int(math.ceil(2 * math.pi / h))
    t = np.exp(2j * np.pi * np.arange(m) / m)
    return (radii[:, None] * t[None, :]).ravel()


def _ball_counts(tree: cKDTree, centers: np.ndarray, radii) -> np.ndarray:
    if centers.size == 0:
        return np.zeros(0, dtype=int)
    xy = np.column_stack([centers.real, centers.imag])
    return np.asarray(tree.query_ball_point(xy, radii, return_length=True), dtype=int)


def count_report(family: PointFamily, probes: int = 4, n: int | None = None, gamma: float | None = None,
                 eps: float = 1.0, delta: float | None = None) -> GeometryReport:
    """Local counting functionals of a family.

    * ``bulk_count_max``: max over centers ``w`` with ``|w| < 1 - gamma/n`` of
      ``#(points in B(w, (1 - |w|)/2))``
    * ``cell_count_max``: max over ``w`` in the boundary annulus of
      ``#(points in B(w, eps/n))``
    * ``annulus_count``: number of points in the boundary annulus

    Centers are the sample points themselves plus a quasi-uniform probe grid
    whose density is set by ``probes``. Balls are open. ``K`` and ``delta``
    refer to the points inside the disk: with ``delta`` given, ``K`` is the
    coloring count at that separation and ``delta`` is replaced by the
    achieved within-class separation; otherwise ``delta`` is the separation of
    the whole set and ``K`` the largest multiplicity of a coincident point.
    """
    if probes < 1:
        raise ValueError("probes must be at least 1")
    n = family.n if n is None else n
    gamma = family.gamma if gamma is None else gamma
    if n is None or gamma is None:
        raise ValueError("count_report needs n and gamma (from the family or as arguments)")
    _check_n_gamma(n, gamma)
    pts = family.expanded()
    rho = 1 - gamma / n
    inside = pts[np.abs(pts) < 1]

    if inside.size == 0:
        K, dsep = 0, math.nan
    elif delta is None:
        dsep = separation(inside)
        _, counts = np.unique(np.round(inside, 15), return_counts=True)
        K = int(counts.max())
    else:
        K, labels = separation_decompose(inside, delta)
        seps = [separation(inside[labels == c]) for c in range(K)]
        seps = [s for s in seps if not math.isnan(s)]
        dsep = min(seps) if seps else math.nan

    if pts.size == 0:
        return GeometryReport(K, dsep, 0, 0, 0, eps, n, gamma, 0, 0)

    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    bulk_c = np.concatenate([pts[in_bulk(pts, n, gamma)], probe_grid(rho * (1 - 1e-15), probes)])
    bulk_c = bulk_c[in_bulk(bulk_c, n, gamma)]
    # query radius shrunk by one ulp-ish factor to emulate open balls
    bc = _ball_counts(tree, bulk_c, 0.5 * (1 - np.abs(bulk_c)) * (1 - 1e-12))
    ann_c = np.concatenate([pts[in_boundary_annulus(pts, n, gamma)], annulus_probe_grid(n, gamma, eps, probes)])
    cc = _ball_counts(tree, ann_c, eps / n * (1 - 1e-12))
    return GeometryReport(
        K=K, delta=dsep,
        bulk_count_max=int(bc.max()) if bc.size else 0,
        annulus_count=int(np.count_nonzero(in_boundary_annulus(pts, n, gamma))),
        cell_count_max=int(cc.max()) if cc.size else 0,
        eps=eps, n=n, gamma=gamma, total_count=int(pts.size),
        n_probes=int(bulk_c.size + ann_c.size),
    )


# ---------------------------------------------------------------------------
# torus projection and weak limits


def project_torus(family: PointFamily):
    """Radial projection ``l -> l/|l|``; returns ``(projected family, injective)``."""
    pts = family.points
    if np.any(pts == 0):
        raise ValueError("the origin has no radial projection")
    proj = pts / np.abs(pts)
    injective = True
    if pts.size > 1:
        a = np.sort(np.mod(np.angle(proj), 2 * np.pi))
        gaps = np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))
        injective = bool(np.all(gaps > ANGLE_TOL))
    fam = family.with_points(proj, multiplicity=family.multiplicity)
    fam.provenance["projected"] = True
    return fam, injective


def _as_points(x) -> np.ndarray:
    if isinstance(x, PointFamily):
        return x.points
    return np.asarray(x, dtype=complex).ravel()


def hausdorff_trunc(E, F, r: float, metric: str = "euclidean") -> float:
    """Hausdorff distance between ``(E n B_r) u dB_r`` and ``(F n B_r) u dB_r``.

    ``B_r`` is the closed disk of radius ``r``. Because the circle belongs to
    both sets, only the truncated points need to be matched.
    """
    if not 0 < r < 1:
        raise ValueError("truncation radius must lie in (0, 1)")
    if metric not in ("euclidean", "pseudo"):
        raise ValueError("metric must be 'euclidean' or 'pseudo'")
    e = _as_points(E)
    f = _as_points(F)
    e = e[np.abs(e) <= r]
    f = f[np.abs(f) <= r]

    def dist(a, b):
        if metric == "euclidean":
            return np.abs(a[:, None] - b[None, :])
        return np.abs(a[:, None] - b[None, :]) / np.abs(1 - a[:, None] * np.conj(b[None, :]))

    def to_circle(a):
        s = np.abs(a)
        return r - s if metric == "euclidean" else (r - s) / (1 - r * s)

    def directed(a, b):
        if a.size == 0:
            return 0.0
        d = to_circle(a)
        if b.size:
            d = np.minimum(d, dist(a, b).min(axis=1))
        return float(d.max())

    return max(directed(e, f), directed(f, e))


def hausdorff_ladder(E, F, radii=(0.5, 0.9, 0.99), metric: str = "euclidean") -> dict:
    return {float(r): hausdorff_trunc(E, F, r, metric) for r in radii}
