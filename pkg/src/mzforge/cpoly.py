"""Complex polynomials on the unit disk.

A :class:`Polynomial` stores its coefficients ``a_0 .. a_n`` in increasing
order together with a nominal degree ``n``, so that a polynomial of actual
degree ``m <= n`` can be treated as an element of ``P_n``.

Norms are computed exactly in coefficient space:

* Bergman ``A^2``: ``||p||^2 = sum |a_k|^2 / (k + 1)``
* Hardy ``H^2``:   ``||p||^2 = sum |a_k|^2``
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

# roots with |z| <= 1 + OUTSIDE_TOL are treated as inside the closed disk
OUTSIDE_TOL = 1e-12


class SpaceKind(str, enum.Enum):
    BERGMAN = "bergman"
    HARDY = "hardy"

    @classmethod
    def parse(cls, value) -> "SpaceKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown space {value!r}; expected 'bergman' or 'hardy'") from None


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Complex polynomial with an explicit nominal degree.

    Parameters
    ----------
    coeffs : array_like
        Coefficients ``a_0, ..., a_m`` (lowest order first).
    degree : int, optional
        Nominal degree ``n``. The coefficient array is zero padded to length
        ``n + 1``; nonzero coefficients above ``n`` raise ``ValueError``.
        Defaults to ``len(coeffs) - 1``.
    """

    coeffs: np.ndarray
    degree: int

    def __init__(self, coeffs, degree: int | None = None):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if degree is None:
            degree = c.size - 1
        degree = int(degree)
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        if c.size > degree + 1:
            if np.any(c[degree + 1:] != 0):
                raise ValueError(f"coefficients exceed nominal degree {degree}")
            c = c[: degree + 1]
        elif c.size < degree + 1:
            c = np.concatenate([c, np.zeros(degree + 1 - c.size, dtype=complex)])
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "degree", degree)

    @classmethod
    def monomial(cls, k: int, degree: int | None = None) -> "Polynomial":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = 1.0
        return cls(c, degree if degree is not None else k)

    @classmethod
    def from_roots(cls, roots, leading: complex = 1.0, degree: int | None = None) -> "Polynomial":
        return cls(_poly_from_roots(np.asarray(roots, dtype=complex), leading), degree)

    @property
    def actual_degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else -1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def with_degree(self, degree: int) -> "Polynomial":
        return Polynomial(self.coeffs, degree)

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        return f"Polynomial(degree={self.degree}, coeffs={np.array2string(self.coeffs, precision=4)})"

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [[float(a.real), float(a.imag)] for a in self.coeffs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Polynomial":
        c = [complex(re, im) for re, im in d["coeffs"]]
        return cls(c, d.get("degree"))


def evaluate(p: Polynomial, z):
    """Horner evaluation of ``p`` at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, p.coeffs[-1], dtype=complex)
    for a in p.coeffs[-2::-1]:
        out = out * z + a
    return out if out.ndim else complex(out)


def norm_sq(p: Polynomial, space) -> float:
    space = SpaceKind.parse(space)
    a2 = np.abs(p.coeffs) ** 2
    if space is SpaceKind.HARDY:
        return float(a2.sum())
    return float((a2 / np.arange(1, a2.size + 1)).sum())


def dilate(p: Polynomial, rho: float) -> Polynomial:
    """Return ``p_rho(z) = p(rho z)``."""
    if not rho > 0:
        raise ValueError("dilation factor must be positive")
    return Polynomial(p.coeffs * rho ** np.arange(p.coeffs.size), p.degree)


def disk_mass(p: Polynomial, rho: float) -> float:
    """``(1/pi) * integral of |p|^2`` over the disk ``|z| < rho``."""
    if not 0 < rho <= 1:
        raise ValueError("radius must lie in (0, 1]")
    k = np.arange(p.coeffs.size)
    return float((np.abs(p.coeffs) ** 2 * rho ** (2 * k + 2) / (k + 1)).sum())


def annulus_mass(p: Polynomial, rho: float) -> float:
    """Bergman mass of ``p`` on ``rho <= |z| < 1``, computed without cancellation."""
    if not 0 < rho <= 1:
        raise ValueError("radius must lie in (0, 1]")
    k = np.arange(p.coeffs.size)
    # 1 - rho^(2k+2) via expm1 keeps full relative accuracy for rho near 1
    tail = -np.expm1((2 * k + 2) * np.log(rho))
    return float((np.abs(p.coeffs) ** 2 * tail / (k + 1)).sum())


def _newton_polish(c: np.ndarray, z: np.ndarray, steps: int = 2) -> np.ndarray:
    # c: coefficients lowest order first; a step is kept only if it shrinks |p|
    dc = c[1:] * np.arange(1, c.size)
    z = z.copy()
    for _ in range(steps):
        pz = np.polynomial.polynomial.polyval(z, c)
        dz = np.polynomial.polynomial.polyval(z, dc)
        ok = dz != 0
        cand = z.copy()
        cand[ok] = z[ok] - pz[ok] / dz[ok]
        better = np.abs(np.polynomial.polynomial.polyval(cand, c)) < np.abs(pz)
        z = np.where(better, cand, z)
    return z


def _split(p: Polynomial):
    """Return ``(lead, ell, trimmed)`` with ``p = z^ell * trimmed`` and trimmed(0) != 0."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no factorization")
    c = p.coeffs
    nz = np.flatnonzero(c)
    ell, top = int(nz[0]), int(nz[-1])
    return c[top], ell, c[ell: top + 1]


def roots(p: Polynomial) -> np.ndarray:
    """All roots of ``p`` with multiplicity.

    Companion-matrix eigenvalues (LAPACK balances the matrix) followed by
    two guarded Newton steps. A factor ``z^ell`` contributes exact zeros.
    """
    _, ell, c = _split(p)
    m = c.size - 1
    out = np.zeros(ell, dtype=complex)
    if m == 0:
        return out
    if m == 1:
        r = np.array([-c[0] / c[1]])
    else:
        comp = np.zeros((m, m), dtype=complex)
        comp[1:, :-1] = np.eye(m - 1)
        comp[:, -1] = -c[:-1] / c[-1]
        r = _newton_polish(c, np.linalg.eigvals(comp))
    return np.concatenate([out, r])


def _poly_from_roots(r: np.ndarray, leading: complex) -> np.ndarray:
    c = np.array([leading], dtype=complex)
    for z in r[np.argsort(np.abs(r), kind="stable")]:
        c = np.concatenate([[0], c]) - z * np.concatenate([c, [0]])
    return c


def factor(p: Polynomial):
    """``p(z) = lead * z^ell * prod (z - z_j)`` with ``z_j != 0``; returns ``(lead, ell, z_j)``."""
    lead, ell, c = _split(p)
    r = roots(Polynomial(c))
    return lead, ell, r


def reflect_outside_roots(p: Polynomial) -> Polynomial:
    """Minimum-phase companion of ``p``.

    Every factor ``z - z_j`` with ``|z_j| > 1`` is replaced by
    ``1 - conj(z_j) z``, which leaves ``|p|`` unchanged on the unit circle.
    The outside factors are divided out of the coefficient sequence one at a
    time instead of rebuilding the product from all roots, so that roots
    inside the disk never pass through the eigensolver's rounding.
    """
    _, _, r = factor(p)
    outside = r[np.abs(r) > 1 + OUTSIDE_TOL]
    c = p.coeffs[: p.actual_degree + 1].copy()
    for zj in outside[np.argsort(-np.abs(outside), kind="stable")]:
        c = _deflate_outside(c, zj)
        c = np.concatenate([c, [0]]) - np.conj(zj) * np.concatenate([[0], c])
    return Polynomial(c, p.degree)


def _deflate_outside(c: np.ndarray, zj: complex) -> np.ndarray:
    # p = (z - zj) s; solved from the constant term upward, stable for |zj| > 1
    s = np.empty(c.size - 1, dtype=complex)
    prev = 0.0
    for k in range(s.size):
        prev = (prev - c[k]) / zj
        s[k] = prev
    return s


def minimum_phase_shrink(p: Polynomial, gamma: float, n: int) -> Polynomial:
    """``p_1(z) = q(z / (1 + gamma/(3n)))`` with ``q`` the minimum-phase companion of ``p``.

    Hardy norms satisfy ``exp(-2 gamma/3) ||p||^2 <= ||p_1||^2 <= ||p||^2``.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if n < 1:
        raise ValueError("degree n must be at least 1")
    if p.actual_degree > n:
        raise ValueError(f"polynomial of degree {p.actual_degree} is not in P_{n}")
    q = reflect_outside_roots(p)
    return Polynomial(dilate(q, 1.0 / (1.0 + gamma / (3.0 * n))).coeffs, n)


def random_polynomial(degree: int, rng: np.random.Generator, roots_spread: float | None = None) -> Polynomial:
    """Random test polynomial.

    With ``roots_spread=None`` the coefficients are iid complex Gaussians.
    Otherwise roots are drawn with moduli log-uniform in
    ``[1/roots_spread, roots_spread]`` so that roots fall on both sides of the circle.
    """
    if roots_spread is None:
        c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        return Polynomial(c, degree)
    mod = np.exp(rng.uniform(-np.log(roots_spread), np.log(roots_spread), degree))
    arg = rng.uniform(0, 2 * np.pi, degree)
    lead = rng.standard_normal() + 1j * rng.standard_normal()
    return Polynomial.from_roots(mod * np.exp(1j * arg), lead, degree)
