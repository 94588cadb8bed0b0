"""Executable checks of the inequalities the sampling theory rests on.

Each ``check_*`` function evaluates one inequality on concrete data (grids,
random polynomials, generated families) and returns a :class:`LemmaResult`
whose ``ok`` flag is the verdict. :data:`CHECKS` maps the short names used
by the command line to these functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .certifier import WeightPolicy, sharp_bounds
from .config import Tolerances
from .cpoly import (
    Polynomial,
    SpaceKind,
    annulus_mass,
    norm_sq,
    random_polynomial,
    reflect_outside_roots,
)
from .families import (
    RadiiPolicy,
    bergman_truncate,
    contraction_iterate,
    contraction_step,
    hyperbolic_lattice,
    lift_to_annulus,
    torus_equispaced,
)
from .geometry import count_report, euclidean_ball_separation, in_two_sided_annulus, project_torus
from .kernels import (
    c_gamma,
    check_kernel_bounds,
    check_near_diagonal,
    find_n_gamma,
    kernel_full_diag,
    near_diagonal_annulus_constant,
)


@dataclass
class LemmaResult:
    name: str
    ok: bool
    params: dict
    details: dict = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "params": self.params,
                "details": self.details, "rows": self.rows}


def _test_polys(rng, degree: int, trials: int, spread: float = 3.0):
    """Alternate Gaussian-coefficient polynomials and polynomials with roots on both sides of the circle."""
    for i in range(trials):
        d = int(rng.integers(1, degree + 1)) if degree > 1 else 1
        if i % 2:
            yield random_polynomial(d, rng, roots_spread=spread).with_degree(degree)
        else:
            yield random_polynomial(d, rng).with_degree(degree)


def _interior_samples(rng, count: int) -> np.ndarray:
    r = np.sqrt(rng.uniform(0, 1, count))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, count))


# ---------------------------------------------------------------------------
# kernels


def check_wei1(gamma: float = 1.0, n: int = 200, grid: int = 64, tol: Tolerances | None = None) -> LemmaResult:
    """Bergman kernel comparison in the bulk and on the boundary annulus."""
    reports = check_kernel_bounds(SpaceKind.BERGMAN, n, gamma, grid)
    n_gamma = find_n_gamma(gamma, grid, n_max=n)
    return LemmaResult(
        "wei1", all(r.ok for r in reports), {"gamma": gamma, "n": n, "grid": grid},
        {"c_gamma": c_gamma(gamma), "n_gamma": n_gamma},
        [r.to_dict() for r in reports],
    )


def check_xei1(gamma: float = 1.0, n: int = 200, grid: int = 64, tol: Tolerances | None = None) -> LemmaResult:
    """Hardy kernel on the two-sided annulus is comparable to ``n``."""
    reports = check_kernel_bounds(SpaceKind.HARDY, n, gamma, grid)
    return LemmaResult("xei1", all(r.ok for r in reports), {"gamma": gamma, "n": n, "grid": grid},
                       {"note": reports[0].note}, [r.to_dict() for r in reports])


def check_neardiag(n: int = 200, gamma0: float = 3.0, grid: int = 24, gamma: float = 1.0, eps: float = 0.5,
                   tol: Tolerances | None = None) -> LemmaResult:
    """Normalized Bergman kernel near the diagonal.

    The verdict tests ``1/4 <= (1 - |w|^2) |kappa_n(z, w)| <= 9/4`` in the
    bulk. The annulus constant ``K`` for ``|z - w| < eps/n`` is reported only.
    """
    rep = check_near_diagonal(n, gamma0, grid)
    K = near_diagonal_annulus_constant(n, gamma, eps, grid)
    return LemmaResult(
        "neardiag", rep.ok,
        {"n": n, "gamma0": gamma0, "grid": grid, "gamma": gamma, "eps": eps},
        {**rep.to_dict(), "annulus_K": K},
    )


# ---------------------------------------------------------------------------
# annulus mass


def check_negl(gamma: float = 0.5, n: int = 64, trials: int = 200, seed: int = 0,
               tol: Tolerances | None = None) -> LemmaResult:
    """Bergman mass of ``p in P_n`` on ``1 - gamma/n <= |z| < 1`` versus ``||p||^2``.

    Bounds: ``(1 - rho^(2n+2)) ||p||^2`` and the cruder ``(1 - exp(-4 gamma)/4) ||p||^2``;
    ``z^n`` attains the first.
    """
    tol = tol or Tolerances()
    if not (gamma > 0 and n > 2 * gamma):
        raise ValueError(f"precondition violated: gamma > 0 and n > 2 gamma (n={n}, gamma={gamma})")
    rho = 1 - gamma / n
    factor = -math.expm1((2 * n + 2) * math.log(rho))
    crude = 1 - math.exp(-4 * gamma) / 4
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in _test_polys(rng, n, trials):
        worst = max(worst, annulus_mass(p, rho) / (factor * norm_sq(p, SpaceKind.BERGMAN)))
    zn = Polynomial.monomial(n)
    eq_err = abs(annulus_mass(zn, rho) / (factor * norm_sq(zn, SpaceKind.BERGMAN)) - 1)
    ok = worst <= 1 + tol.bound_rtol and eq_err <= tol.equality_rtol and factor <= crude
    return LemmaResult(
        "negl", bool(ok), {"gamma": gamma, "n": n, "trials": trials, "seed": seed},
        {"factor": factor, "crude_factor": crude, "worst_ratio": worst, "monomial_equality_error": eq_err},
    )


def check_boundary(gamma: float = 1.0, n: int = 32, trials: int = 50, seed: int = 0, s: float = 0.9,
                   angular_factor: float = 2.0, tol: Tolerances | None = None) -> LemmaResult:
    """Sampling sum over the boundary annulus controlled by mass on a wider annulus.

    For points whose disks ``B(l, delta (1 - |l|))`` are disjoint,
    ``sum_{|l| >= 1 - gamma/n} |f(l)|^2 / k(l, l) <= (4/delta^2) mass(f, 1 - (1 + delta) gamma/n)``.
    Tested on a ring lattice and random polynomials of degree up to ``n``.
    """
    tol = tol or Tolerances()
    lattice = hyperbolic_lattice(s, angular_factor, 1 - gamma / (16 * n))
    pts = lattice.points
    delta = euclidean_ball_separation(pts)
    rho_in = 1 - gamma / n
    rho_out = 1 - (1 + delta) * gamma / n
    if rho_out <= 0:
        raise ValueError("precondition violated: (1 + delta) gamma < n")
    ring = pts[np.abs(pts) >= rho_in]
    w = 1 / kernel_full_diag(SpaceKind.BERGMAN, ring)
    rng = np.random.default_rng(seed)
    worst = 0.0
    polys = list(_test_polys(rng, n, trials)) + [Polynomial.monomial(n)]
    for p in polys:
        lhs = float(np.sum(w * np.abs(p(ring)) ** 2))
        rhs = 4 / delta**2 * annulus_mass(p, rho_out)
        worst = max(worst, lhs / rhs)
    return LemmaResult(
        "boundary", bool(worst <= 1 + tol.bound_rtol),
        {"gamma": gamma, "n": n, "trials": trials, "seed": seed, "s": s, "angular_factor": angular_factor},
        {"delta": delta, "points_in_annulus": int(ring.size), "worst_ratio": worst},
    )


# ---------------------------------------------------------------------------
# counting versus the upper sampling constant


def check_besselgeom(n_list=(16, 32, 64), s: float = 0.9, angular_factor: float = 2.0, gamma: float = 1.0,
                     probes: int = 4, tol: Tolerances | None = None) -> LemmaResult:
    """Upper constants ``B_n`` and local point counts stay bounded together.

    The family is the ring lattice truncated to ``|z| < 1 - gamma/n``. The
    verdict requires ``B_n`` and both count maxima to have spread at most
    ``spread_factor`` over ``n_list``.
    """
    tol = tol or Tolerances()
    rows = []
    for n in n_list:
        fam = bergman_truncate(hyperbolic_lattice(s, angular_factor, 1 - gamma / n), n, gamma)
        rep = sharp_bounds(SpaceKind.BERGMAN, n, fam, WeightPolicy.KERNEL_DIAG)
        geo = count_report(fam, probes=probes)
        rows.append({"n": n, "B_n": rep.B, "bulk_count_max": geo.bulk_count_max,
                     "cell_count_max": geo.cell_count_max, "points": len(fam)})

    def spread(key):
        v = np.array([r[key] for r in rows], dtype=float)
        return float(v.max() / v.min()) if v.min() > 0 else math.inf

    spreads = {k: spread(k) for k in ("B_n", "bulk_count_max", "cell_count_max")}
    ok = all(v <= tol.spread_factor for v in spreads.values())
    return LemmaResult(
        "besselgeom", bool(ok),
        {"n_list": list(n_list), "s": s, "angular_factor": angular_factor, "gamma": gamma, "probes": probes},
        {"spreads": spreads, "spread_factor": tol.spread_factor}, rows,
    )


# ---------------------------------------------------------------------------
# reflection and contraction


def check_eq21(trials: int = 500, degree_max: int = 64, samples: int = 500, seed: int = 0,
               tol: Tolerances | None = None) -> LemmaResult:
    """Reflecting outside roots keeps ``|p|`` on the circle and lowers it inside.

    Checks ``||q| - |p|| <= rtol (|p| + ||p||)`` at 256 circle points and
    ``|q(z)| <= min(|p(z)|, |p(1/conj z)|) + atol ||p||`` at interior samples.
    """
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    circle = np.exp(2j * np.pi * np.arange(256) / 256)
    worst_b = worst_i = 0.0
    bad_b = bad_i = 0
    for p in _test_polys(rng, degree_max, trials):
        q = reflect_outside_roots(p)
        scale = math.sqrt(norm_sq(p, SpaceKind.HARDY))
        pb = np.abs(p(circle))
        eb = np.abs(np.abs(q(circle)) - pb) / (pb + scale)
        worst_b = max(worst_b, float(eb.max()))
        bad_b += int(np.count_nonzero(eb > tol.boundary_rtol))
        z = _interior_samples(rng, samples)
        z = z[z != 0]
        bound = np.minimum(np.abs(p(z)), np.abs(p(1 / np.conj(z))))
        ei = (np.abs(q(z)) - bound) / scale
        worst_i = max(worst_i, float(ei.max()))
        bad_i += int(np.count_nonzero(ei > tol.interior_atol))
    return LemmaResult(
        "eq21", bad_b == 0 and bad_i == 0,
        {"trials": trials, "degree_max": degree_max, "samples": samples, "seed": seed},
        {"boundary_worst": worst_b, "boundary_violations": bad_b,
         "interior_worst": worst_i, "interior_violations": bad_i},
    )


def _two_sided_family(n: int, gamma: float, seed: int):
    return lift_to_annulus(torus_equispaced(n), gamma, RadiiPolicy("two-sided", seed))


def check_eq19(gamma: float = 0.3, n: int = 20, trials: int = 50, seed: int = 0,
               tol: Tolerances | None = None) -> LemmaResult:
    """One contraction step does not increase the sampling sum and keeps the norm above ``exp(-2 gamma/3)``."""
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    fam = _two_sided_family(n, gamma, seed)
    proj0, _ = project_torus(fam)
    worst_sum = worst_norm = 0.0
    in_annulus = True
    for p in _test_polys(rng, n, trials):
        fam1, p1 = contraction_step(fam, p, gamma, n)
        s0 = float(np.sum(np.abs(p(fam.points)) ** 2))
        s1 = float(np.sum(np.abs(p1(fam1.points)) ** 2))
        worst_sum = max(worst_sum, s1 / s0 - 1)
        r = norm_sq(p1, SpaceKind.HARDY) / norm_sq(p, SpaceKind.HARDY)
        worst_norm = max(worst_norm, math.exp(-2 * gamma / 3) / r - 1, r - 1)
        proj1, _ = project_torus(fam1)
        in_annulus &= bool(np.all(in_two_sided_annulus(fam1.points, n, 0.75 * gamma, rtol=1e-12)))
        in_annulus &= bool(np.allclose(proj1.points, proj0.points, rtol=0, atol=1e-14))
    ok = worst_sum <= tol.monotone_rtol and worst_norm <= tol.monotone_rtol
    if n >= 4 * gamma:
        ok = ok and in_annulus
    return LemmaResult(
        "eq19", bool(ok), {"gamma": gamma, "n": n, "trials": trials, "seed": seed},
        {"worst_sum_increase": worst_sum, "worst_norm_excess": worst_norm,
         "annulus_and_projection_ok": in_annulus},
    )


def check_eq25(gamma: float = 0.3, n: int = 20, trials: int = 20, levels: int = 20, seed: int = 0,
               tol: Tolerances | None = None) -> LemmaResult:
    """Iterated contraction: ``||p_l||^2 >= exp(-8 gamma/3) ||p||^2`` with nonincreasing sums."""
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    fam = _two_sided_family(n, gamma, seed)
    floor = math.exp(-8 * gamma / 3)
    rows = []
    ok = True
    for i, p in enumerate(_test_polys(rng, n, trials)):
        tr = contraction_iterate(fam, p, gamma, n, max_levels=levels)
        norms = np.array([lv.norm_sq for lv in tr.levels])
        sums = np.array([lv.sampling_sum for lv in tr.levels])
        g_ok = all(lv.gamma == gamma * 0.75**lv.level for lv in tr.levels)
        mono = bool(np.all(np.diff(norms) <= tol.monotone_rtol * norms[:-1])
                    and np.all(np.diff(sums) <= tol.monotone_rtol * sums[:-1]))
        above = bool(np.all(norms >= floor * norms[0] * (1 - tol.monotone_rtol)))
        ok &= g_ok and mono and above
        rows.append({"trial": i, "levels": len(tr.levels) - 1, "final_ratio": tr.final_ratio,
                     "monotone": mono, "above_floor": above, "gamma_exact": g_ok})
    return LemmaResult(
        "eq25", bool(ok), {"gamma": gamma, "n": n, "trials": trials, "levels": levels, "seed": seed},
        {"floor": floor, "min_final_ratio": min(r["final_ratio"] for r in rows)}, rows,
    )


CHECKS = {
    "wei1": check_wei1,
    "neardiag": check_neardiag,
    "xei1": check_xei1,
    "negl": check_negl,
    "boundary": check_boundary,
    "besselgeom": check_besselgeom,
    "eq21": check_eq21,
    "eq19": check_eq19,
    "eq25": check_eq25,
}
