import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mzforge.cpoly import (
    Polynomial,
    SpaceKind,
    annulus_mass,
    dilate,
    disk_mass,
    evaluate,
    factor,
    minimum_phase_shrink,
    norm_sq,
    random_polynomial,
    reflect_outside_roots,
    roots,
)


def close_sets(a, b, tol=1e-10):
    a = sorted(np.asarray(a), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    b = sorted(np.asarray(b), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    return len(a) == len(b) and all(abs(x - y) < tol for x, y in zip(a, b))


def test_evaluate_examples():
    assert abs(evaluate(Polynomial([1, 0, 1]), 1j)) < 1e-15
    assert evaluate(Polynomial([1]), 0.7 + 0.2j) == 1
    assert evaluate(Polynomial([1, -2, 0, 1]), 0.5) == pytest.approx(0.125, abs=1e-15)


def test_evaluate_array_shape():
    p = Polynomial([1, 2, 3])
    z = np.linspace(0, 1, 6).reshape(2, 3)
    assert p(z).shape == (2, 3)
    assert np.allclose(p(z), 1 + 2 * z + 3 * z**2)


def test_nominal_degree_padding_and_rejection():
    p = Polynomial([1, 2], degree=5)
    assert p.degree == 5 and p.coeffs.size == 6 and p.actual_degree == 1
    assert Polynomial([1, 2, 0, 0], degree=1).coeffs.size == 2
    with pytest.raises(ValueError):
        Polynomial([1, 2, 3], degree=1)


def test_norms_of_monomials():
    for n in (0, 1, 7, 40):
        zn = Polynomial.monomial(n)
        assert norm_sq(zn, SpaceKind.BERGMAN) == pytest.approx(1 / (n + 1))
        assert norm_sq(zn, "hardy") == 1
    n = 12
    assert norm_sq(Polynomial(np.r_[-1, np.zeros(n - 1), 1]), SpaceKind.HARDY) == 2


def test_space_parse_rejects_unknown():
    with pytest.raises(ValueError, match="bergman"):
        SpaceKind.parse("fock")


def test_dilate_examples():
    p = Polynomial([1, 1])
    assert np.allclose(dilate(p, 0.5).coeffs, [1, 0.5])
    assert np.array_equal(dilate(p, 1.0).coeffs, p.coeffs)
    with pytest.raises(ValueError):
        dilate(p, 0)
    gamma = 1.0
    for n in (3, 10, 100):
        v = norm_sq(dilate(Polynomial.monomial(n), 1 - gamma / n), SpaceKind.HARDY)
        assert v == pytest.approx((1 - gamma / n) ** (2 * n))
        assert math.exp(-4 * gamma) <= v <= math.exp(-2 * gamma)


def test_disk_mass_examples():
    n, rho = 9, 0.7
    assert disk_mass(Polynomial.monomial(n), rho) == pytest.approx(rho ** (2 * n + 2) / (n + 1))
    p = Polynomial([1, 1])
    assert disk_mass(p, 0.5) == pytest.approx(0.25 + 0.5**4 / 2)
    # polar quadrature oracle: (1/pi) * integral of |1 + z|^2 over |z| < 1/2
    r = (np.arange(400) + 0.5) / 400 * 0.5
    t = 2 * np.pi * np.arange(64) / 64
    z = r[:, None] * np.exp(1j * t)[None, :]
    quad = np.sum(np.abs(1 + z) ** 2 * r[:, None]) * (0.5 / 400) * (2 * np.pi / 64) / np.pi
    assert disk_mass(p, 0.5) == pytest.approx(quad, rel=1e-5)
    assert disk_mass(p, 1.0) == pytest.approx(norm_sq(p, SpaceKind.BERGMAN))
    for bad in (0.0, 1.5, -0.1):
        with pytest.raises(ValueError):
            disk_mass(p, bad)


def test_annulus_mass_is_complement():
    rng = np.random.default_rng(1)
    p = random_polynomial(30, rng)
    for rho in (0.3, 0.9, 0.999):
        total = norm_sq(p, SpaceKind.BERGMAN)
        assert annulus_mass(p, rho) == pytest.approx(total - disk_mass(p, rho), rel=1e-10)


def test_roots_examples():
    assert close_sets(roots(Polynomial([-1, 0, 1])), [1, -1])
    assert close_sets(roots(Polynomial.monomial(5)), np.zeros(5))
    assert close_sets(roots(Polynomial([2, -2, 1])), [1 + 1j, 1 - 1j])
    with pytest.raises(ValueError):
        roots(Polynomial([0, 0]))


def test_factor_recovers_leading_coefficient():
    p = Polynomial.from_roots([0.5, -2j], leading=3 - 1j)
    p = Polynomial(np.r_[0, 0, p.coeffs[:3]], 4)  # times z^2
    lead, ell, r = factor(p)
    assert lead == pytest.approx(3 - 1j)
    assert ell == 2
    assert close_sets(r, [0.5, -2j])


def test_reflection_examples():
    q = reflect_outside_roots(Polynomial([-2, 1]))
    assert np.allclose(q.coeffs, [1, -2])
    assert norm_sq(q, SpaceKind.HARDY) == pytest.approx(5)

    inside = Polynomial.from_roots([0.3, -0.5j, 0.9])
    assert np.allclose(reflect_outside_roots(inside).coeffs, inside.coeffs, atol=1e-14)

    p = Polynomial.from_roots([2, 0.5])
    q = reflect_outside_roots(p)
    assert abs(q(0)) == pytest.approx(0.5)
    assert abs(q(0)) <= abs(p(0))


def test_reflection_keeps_nominal_degree():
    p = Polynomial([-2, 1], degree=6)
    assert reflect_outside_roots(p).degree == 6


def test_minimum_phase_shrink_examples():
    assert np.allclose(minimum_phase_shrink(Polynomial([1]), 0.5, 4).coeffs[:1], [1])
    p1 = minimum_phase_shrink(Polynomial([0, 1]), 3, 10)
    assert np.allclose(p1.coeffs[:2], [0, 1 / 1.1])
    assert norm_sq(p1, "hardy") == pytest.approx(1 / 1.21)
    p = Polynomial([-2, 1])
    p1 = minimum_phase_shrink(p, 0.3, 5)
    ratio = norm_sq(p1, "hardy") / norm_sq(p, "hardy")
    assert math.exp(-0.2) <= ratio <= 1
    with pytest.raises(ValueError):
        minimum_phase_shrink(p, 0.0, 5)
    with pytest.raises(ValueError):
        minimum_phase_shrink(Polynomial.monomial(6), 1.0, 5)


def test_json_round_trip():
    p = Polynomial([1 + 2j, -0.5, 3j], degree=4)
    q = Polynomial.from_dict(p.to_dict())
    assert q.degree == 4 and np.array_equal(q.coeffs, p.coeffs)


coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=65), st.integers(0, 3))
def test_parseval_on_the_circle(c, extra):
    p = Polynomial(c)
    m = 2 * p.degree + 1 + extra
    z = np.exp(2j * np.pi * np.arange(m) / m)
    mean = float(np.mean(np.abs(p(z)) ** 2))
    nrm = norm_sq(p, SpaceKind.HARDY)
    assert abs(mean - nrm) <= 1e-10 * max(nrm, 1e-300) + 1e-300


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=40), st.floats(0.01, 1.0))
def test_disk_mass_lower_bound(c, rho):
    p = Polynomial(c)
    n = p.degree
    assert disk_mass(p, rho) >= rho ** (2 * n + 2) * norm_sq(p, SpaceKind.BERGMAN) * (1 - 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**31), st.booleans())
def test_reflection_properties(degree, seed, spread_roots):
    rng = np.random.default_rng(seed)
    p = random_polynomial(degree, rng, roots_spread=3.0 if spread_roots else None)
    q = reflect_outside_roots(p)
    scale = math.sqrt(norm_sq(p, SpaceKind.HARDY))
    circle = np.exp(2j * np.pi * np.arange(256) / 256)
    pb = np.abs(p(circle))
    assert np.all(np.abs(np.abs(q(circle)) - pb) <= 1e-8 * (pb + scale))
    z = np.sqrt(rng.uniform(0, 1, 500)) * np.exp(2j * np.pi * rng.uniform(0, 1, 500))
    bound = np.minimum(np.abs(p(z)), np.abs(p(1 / np.conj(z))))
    assert np.all(np.abs(q(z)) <= bound + 1e-8 * scale)
    if q.actual_degree > 0:
        assert np.all(np.abs(roots(q)) <= 1 + 1e-6)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 32), st.integers(0, 2**31), st.floats(0.05, 3.0))
def test_shrink_norm_sandwich(degree, seed, gamma):
    rng = np.random.default_rng(seed)
    n = degree + int(rng.integers(0, 4))
    p = random_polynomial(degree, rng, roots_spread=3.0).with_degree(n)
    r = norm_sq(minimum_phase_shrink(p, gamma, n), "hardy") / norm_sq(p, "hardy")
    assert math.exp(-2 * gamma / 3) * (1 - 1e-7) <= r <= 1 + 1e-7
