"""Generators of candidate MZ families and the root-reflection contraction.

Torus families are lifted into the boundary annulus, sampling sets for the
Bergman space are truncated to the disk ``|z| < 1 - gamma/n``, and the
contraction moves a family in the two-sided annulus towards the circle while
replacing the test polynomial by its shrunken minimum-phase companion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .cpoly import Polynomial, SpaceKind, minimum_phase_shrink, norm_sq
from .geometry import PointFamily, in_bulk, in_two_sided_annulus, project_torus

ANNULUS_RTOL = 1e-12


def _ceil(x: float) -> int:
    # guard against 25.500000000000004-style rounding in products
    return int(math.ceil(x - 1e-9))


def torus_equispaced(n: int, oversample: float = 1.0, seed: int = 0, jitter: float = 0.0) -> PointFamily:
    """``L = ceil(oversample (n+1))`` equispaced points on the unit circle.

    Each angle is moved by at most ``jitter / L`` radians (uniformly, seeded).
    """
    if oversample < 1:
        raise ValueError("oversample must be at least 1")
    if jitter < 0:
        raise ValueError("jitter must be nonnegative")
    L = _ceil(oversample * (n + 1))
    theta = 2 * np.pi * np.arange(L) / L
    if jitter > 0:
        if jitter >= np.pi:
            raise ValueError("jitter too large: neighbouring points could collide")
        rng = np.random.default_rng(seed)
        theta = theta + rng.uniform(-jitter / L, jitter / L, L)
    return PointFamily(
        np.exp(1j * theta), n=n, gamma=None,
        provenance={"recipe": "torus-equispaced", "n": n, "oversample": oversample,
                    "seed": seed, "jitter": jitter},
    )


class RadiiMode(str, enum.Enum):
    CONSTANT_INNER = "constant-inner"
    UNIFORM_RANDOM = "uniform-random"
    TWO_SIDED = "two-sided"
    EXPLICIT = "explicit"


@dataclass
class RadiiPolicy:
    mode: RadiiMode = RadiiMode.CONSTANT_INNER
    seed: int = 0
    radii: list[float] | None = None

    def __post_init__(self):
        self.mode = RadiiMode(self.mode)

    def generate(self, count: int, n: int, gamma: float) -> np.ndarray:
        rho = 1 - gamma / n
        rng = np.random.default_rng(self.seed)
        if self.mode is RadiiMode.CONSTANT_INNER:
            return np.full(count, rho)
        if self.mode is RadiiMode.UNIFORM_RANDOM:
            return rng.uniform(rho, 1.0, count)
        if self.mode is RadiiMode.TWO_SIDED:
            return np.minimum(rng.uniform(rho, 1 / rho, count), 1 / rho)
        r = np.asarray(self.radii, dtype=float)
        if r.shape != (count,):
            raise ValueError("explicit radii must match the number of points")
        if np.any(r < rho * (1 - ANNULUS_RTOL)) or np.any(r > (1 + ANNULUS_RTOL) / rho):
            raise ValueError("explicit radii leave the two-sided annulus")
        return r

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "seed": self.seed, "radii": self.radii}


def lift_to_annulus(torus: PointFamily, gamma: float, policy: RadiiPolicy | None = None,
                    n: int | None = None) -> PointFamily:
    """Place each circle point ``e^{i nu}`` at ``rho e^{i nu}`` with the policy's radius."""
    policy = policy or RadiiPolicy()
    n = torus.n if n is None else n
    if n is None:
        raise ValueError("degree n is required")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if not n > 2 * gamma:
        raise ValueError(f"need n > 2 gamma (n={n}, gamma={gamma})")
    if not np.allclose(np.abs(torus.points), 1.0, rtol=0, atol=1e-12):
        raise ValueError("input points must have unit modulus")
    r = policy.generate(len(torus), n, gamma)
    prov = dict(torus.provenance)
    prov["lift"] = {"gamma": gamma, **policy.to_dict()}
    return torus.with_points(r * torus.points, n=n, gamma=gamma, multiplicity=torus.multiplicity,
                             provenance=prov)


def hyperbolic_lattice(s: float, angular_factor: float, r_max: float, n: int | None = None,
                       gamma: float | None = None) -> PointFamily:
    """Ring lattice with ``1 - r_j = s^j``.

    Ring ``j >= 1`` carries ``ceil(2 pi angular_factor / (1 - r_j))``
    equispaced points, odd rings rotated by half a step. Ring 0 has radius 0
    and collapses to the single point ``0``.
    """
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    if not angular_factor > 0:
        raise ValueError("angular_factor must be positive")
    if not 0 <= r_max < 1:
        raise ValueError("r_max must lie in [0, 1)")
    rings = [np.zeros(1, dtype=complex)]
    j = 1
    while 1 - s**j <= r_max:
        r = 1 - s**j
        m = _ceil(2 * np.pi * angular_factor / (1 - r))
        rings.append(r * np.exp(2j * np.pi * (np.arange(m) + 0.5 * (j % 2)) / m))
        j += 1
    return PointFamily(
        np.concatenate(rings), n=n, gamma=gamma,
        provenance={"recipe": "hyperbolic-lattice", "s": s, "angular_factor": angular_factor,
                    "r_max": r_max},
    )


def bergman_truncate(family: PointFamily, n: int, gamma: float) -> PointFamily:
    """Keep the points with ``|z| < 1 - gamma/n``, the complement of the boundary annulus in the disk."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if not n > 2 * gamma:
        raise ValueError(f"need n > 2 gamma (n={n}, gamma={gamma})")
    keep = in_bulk(family.points, n, gamma)
    prov = dict(family.provenance)
    prov["truncate"] = {"n": n, "gamma": gamma}
    return family.subset(keep, n=n, gamma=gamma, provenance=prov)


def example27(n: int, gamma: float, alpha: float) -> PointFamily:
    """``n`` points ``(1 - gamma/n) e^{2 pi i k/n}`` plus the point ``alpha e^{2 pi i / n^2}``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    ring = (1 - gamma / n) * np.exp(2j * np.pi * np.arange(n) / n)
    extra = alpha * np.exp(2j * np.pi / n**2)
    return PointFamily(np.concatenate([ring, [extra]]), n=n, gamma=gamma,
                       provenance={"recipe": "example27", "n": n, "gamma": gamma, "alpha": alpha})


# ---------------------------------------------------------------------------
# contraction


def _sampling_sum(p: Polynomial, pts: np.ndarray, n: int) -> float:
    return float(np.sum(np.abs(p(pts)) ** 2) / n)


def contraction_step(family: PointFamily, p: Polynomial, gamma: float, n: int | None = None):
    """One contraction step; returns ``(family_1, p_1)``.

    Points with ``|l| <= 1`` move to ``(1 + gamma/(3n)) l``, points outside to
    ``(1 + gamma/(3n)) / conj(l)``. ``p_1`` is the minimum-phase companion of
    ``p`` shrunk by ``(1 + gamma/(3n))^-1``. Then
    ``sum |p_1|^2 over family_1 <= sum |p|^2 over family``. The new family
    lies in the annulus with parameter ``3 gamma / 4`` once ``n >= 4 gamma``.
    """
    n = family.n if n is None else n
    if n is None:
        raise ValueError("degree n is required")
    if not gamma > 0 or not n > 2 * gamma:
        raise ValueError(f"need gamma > 0 and n > 2 gamma (n={n}, gamma={gamma})")
    if p.is_zero():
        raise ValueError("test polynomial must be nonzero")
    if p.actual_degree > n:
        raise ValueError(f"polynomial of degree {p.actual_degree} is not in P_{n}")
    lam = family.points
    if not np.all(in_two_sided_annulus(lam, n, gamma, rtol=ANNULUS_RTOL)):
        raise ValueError("points must lie in the two-sided annulus 1-gamma/n <= |z| <= (1-gamma/n)^-1")
    _, injective = project_torus(family)
    if not injective:
        raise ValueError("radial projection is not one-to-one (e.g. both l and 1/conj(l) present)")
    f = 1 + gamma / (3 * n)
    inside = np.abs(lam) <= 1
    mu = np.where(inside, f * lam, f / np.conj(np.where(inside, 1.0, lam)))
    prov = dict(family.provenance)
    prov["contraction_gamma"] = gamma
    fam1 = family.with_points(mu, n=n, gamma=0.75 * gamma, multiplicity=family.multiplicity, provenance=prov)
    return fam1, minimum_phase_shrink(p, gamma, n)


@dataclass
class ContractionLevel:
    level: int
    gamma: float
    norm_sq: float
    sampling_sum: float
    max_radial_deviation: float
    family: PointFamily = field(repr=False)
    poly: Polynomial = field(repr=False)


@dataclass
class ContractionTrace:
    levels: list[ContractionLevel]
    converged: bool
    final_ratio: float  # ||p_last||^2 / ||p||^2
    floor: float  # exp(-8 gamma / 3)

    def rows(self) -> list[dict]:
        return [
            {"level": lv.level, "gamma": lv.gamma, "norm_sq": lv.norm_sq,
             "sampling_sum": lv.sampling_sum, "max_radial_deviation": lv.max_radial_deviation}
            for lv in self.levels
        ]


def contraction_iterate(family: PointFamily, p: Polynomial, gamma: float, n: int | None = None,
                        max_levels: int = 20, stop_deviation: float = 1e-9) -> ContractionTrace:
    """Repeat :func:`contraction_step` with ``gamma_l = (3/4)^l gamma``.

    Stops after ``max_levels`` steps or when every point is within
    ``stop_deviation`` of the circle.
    """
    n = family.n if n is None else n
    if max_levels < 0:
        raise ValueError("max_levels must be nonnegative")

    def level(ell, fam, q):
        return ContractionLevel(
            ell, gamma * 0.75**ell, norm_sq(q, SpaceKind.HARDY), _sampling_sum(q, fam.points, n),
            float(np.max(np.abs(np.abs(fam.points) - 1))) if len(fam) else 0.0, fam, q,
        )

    levels = [level(0, family, p)]
    fam, q = family, p
    converged = levels[0].max_radial_deviation < stop_deviation
    for ell in range(1, max_levels + 1):
        if converged:
            break
        fam, q = contraction_step(fam, q, gamma * 0.75 ** (ell - 1), n)
        levels.append(level(ell, fam, q))
        converged = levels[-1].max_radial_deviation < stop_deviation
    p0 = levels[0].norm_sq
    return ContractionTrace(levels, converged, levels[-1].norm_sq / p0, math.exp(-8 * gamma / 3))


# ---------------------------------------------------------------------------
# named recipes


def _recipe_torus(n, oversample=1.0, seed=0, jitter=0.0):
    return torus_equispaced(n, oversample, seed, jitter)


def _recipe_lifted(n, gamma, oversample=1.0, radii="constant-inner", seed=0, jitter=0.0):
    torus = torus_equispaced(n, oversample, seed, jitter)
    return lift_to_annulus(torus, gamma, RadiiPolicy(radii, seed))


def _recipe_lattice(n, s, angular_factor, r_max=None, gamma=None):
    if r_max is None:
        if gamma is None:
            raise ValueError("hyperbolic-lattice needs r_max or gamma")
        r_max = 1 - gamma / n
    return hyperbolic_lattice(s, angular_factor, r_max, n=n, gamma=gamma)


def _recipe_truncated(n, s, angular_factor, gamma):
    lattice = hyperbolic_lattice(s, angular_factor, 1 - gamma / n, n=n, gamma=gamma)
    return bergman_truncate(lattice, n, gamma)


def example27_alpha(n: int, alpha_mode: str = "interior", alpha: float | None = None) -> float:
    """``alpha_n`` for the named modes: ``interior`` is ``1/n^2``, ``zero`` is ``0``, ``value`` uses ``alpha``."""
    if alpha_mode == "interior":
        return 1.0 / n**2
    if alpha_mode == "zero":
        return 0.0
    if alpha_mode == "value":
        if alpha is None:
            raise ValueError("alpha_mode 'value' needs alpha")
        return float(alpha)
    raise ValueError(f"unknown alpha mode {alpha_mode!r}; expected interior, zero or value")


def _recipe_example27(n, gamma, alpha_mode="interior", alpha=None):
    return example27(n, gamma, example27_alpha(n, alpha_mode, alpha))


RECIPES = {
    "torus-equispaced": _recipe_torus,
    "lifted-torus": _recipe_lifted,
    "hyperbolic-lattice": _recipe_lattice,
    "bergman-truncated": _recipe_truncated,
    "example27": _recipe_example27,
}


def make_family(recipe: str, n: int, **params) -> PointFamily:
    """Build the family of a named recipe for degree ``n``.

    Unknown recipes and parameters raise ``ValueError``.
    """
    if recipe not in RECIPES:
        raise ValueError(f"unknown recipe {recipe!r}; valid recipes: {', '.join(RECIPES)}")
    fn = RECIPES[recipe]
    try:
        fam = fn(n, **params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for recipe {recipe!r}: {exc}") from None
    fam.provenance["recipe"] = recipe
    fam.provenance["params"] = {"n": n, **params}
    return fam
