import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mzforge import kernels
from mzforge.cpoly import Polynomial, SpaceKind, norm_sq, random_polynomial
from mzforge.kernels import (
    c_gamma,
    check_kernel_bounds,
    check_near_diagonal,
    find_n_gamma,
    inner,
    kernel_diag,
    kernel_full,
    kernel_normalized,
    kernel_polynomial,
    kernel_trunc,
)

B, H = SpaceKind.BERGMAN, SpaceKind.HARDY


def test_full_kernel_examples():
    assert kernel_full(B, 0, 0) == 1
    assert kernel_full(B, 0.5, 0.5) == pytest.approx(16 / 9)
    assert kernel_full(H, 0.5, 0.5) == pytest.approx(4 / 3)
    with pytest.raises(ValueError):
        kernel_full(B, 1.0, 1.0)
    with pytest.raises(ValueError):
        kernel_full(H, 2.0, 0.6)


def test_truncated_kernel_examples():
    assert kernel_trunc(B, 2, 0.5, 0.5) == pytest.approx(1.6875, rel=1e-15)
    for n in (0, 1, 17, 256):
        z = np.exp(1j * np.linspace(0, 6, 7))
        assert np.allclose(kernel_trunc(H, n, z, z), n + 1, rtol=1e-13)
        assert kernel_trunc(B, 0, 0.3 + 0.4j, -0.9) == 1
        assert kernel_trunc(H, 0, 5.0, 7j) == 1


def test_truncated_kernel_outside_disk_matches_sum():
    z, w = 1.05 * np.exp(0.3j), 1.05 * np.exp(0.1j)
    u = z * np.conj(w)
    for n in (5, 40):
        k = np.arange(n + 1)
        assert kernel_trunc(B, n, z, w) == pytest.approx(np.sum((k + 1) * u**k), rel=1e-12)
        assert kernel_trunc(H, n, z, w) == pytest.approx(np.sum(u**k), rel=1e-12)


def test_regime_reporting():
    _, direct = kernel_trunc(H, 10, 1.0, 1.0, return_regime=True)
    assert direct
    _, direct = kernel_trunc(H, 10, 0.5, 0.5, return_regime=True)
    assert not direct


def test_tau_read_at_call_time(monkeypatch):
    monkeypatch.setattr(kernels, "TAU", 0.9)
    _, direct = kernel_trunc(H, 10, 0.5, 0.5, return_regime=True)
    assert direct


def test_normalized_kernel_examples():
    w = 0.3 - 0.2j
    for space in (B, H):
        assert kernel_normalized(space, 7, w, w) == pytest.approx(math.sqrt(kernel_diag(space, 7, w)))
        assert np.allclose(kernel_normalized(space, 7, np.array([0.1, -0.5j]), 0), 1)
    assert kernel_normalized(B, 1, 0, 0.5) == pytest.approx(1 / math.sqrt(1.5))


def test_normalized_kernel_has_unit_norm():
    for space in (B, H):
        for w in (0.0, 0.4j, 0.95, 1.02):
            assert norm_sq(kernel_polynomial(space, 12, w, normalized=True), space) == pytest.approx(1)


def test_c_gamma_value():
    assert c_gamma(1) == pytest.approx(1 - 3 * math.exp(-2))
    assert c_gamma(1) == pytest.approx(0.59399, abs=1e-5)


def test_check_kernel_bounds_examples():
    bulk, ann = check_kernel_bounds(B, 100, 1.0, 64)
    assert bulk.ok and ann.ok
    assert bulk.region == "bulk" and ann.region == "annulus"
    assert bulk.upper_ratio <= 1
    (hardy,) = check_kernel_bounds(H, 100, 1.0, 64)
    assert hardy.ok
    assert hardy.worst_ratio <= 1


def test_check_kernel_bounds_preconditions():
    with pytest.raises(ValueError, match="max"):
        check_kernel_bounds(B, 3, 1.0)
    with pytest.raises(ValueError, match="gamma > 0"):
        check_kernel_bounds(B, 10, 0.0)


def test_hardy_stated_constant_is_reported():
    (rep,) = check_kernel_bounds(H, 200, 1.0, 64)
    assert "holds" in rep.note


def test_witness_attains_worst_ratio():
    bulk, _ = check_kernel_bounds(B, 20, 1.0, 32)
    z = bulk.lower_witness
    r = kernel_diag(B, 20, z) / (bulk.lower_const * kernels.kernel_full_diag(B, z))
    assert r == pytest.approx(bulk.lower_ratio)


def test_n_gamma_scan():
    n0 = find_n_gamma(1.0, 32, n_max=64)
    assert 3 < n0 <= 64
    for n in (n0, n0 + 7, 64):
        assert check_kernel_bounds(B, n, 1.0, 32)[0].lower_ok


def test_near_diagonal_report_fields():
    rep = check_near_diagonal(40)
    assert rep.scaled_min > 0 and rep.scaled_max >= rep.scaled_min
    with pytest.raises(ValueError):
        check_near_diagonal(3, gamma0=3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 256), st.floats(-3.5, -2.5), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi),
       st.floats(0.5, 1.5))
def test_closed_form_agrees_with_direct_sum(n, log_gap, phi, theta, r):
    # u = z conj(w) with |1 - u| in [tau/10, 10 tau]
    d = 10 ** (log_gap - 1.0) * np.exp(1j * phi)
    u = 1 - d
    w = r * np.exp(1j * theta)
    z = u / np.conj(w)
    for space in (B, H):
        a = kernels._closed_form(space, n, np.array([u]))[0]
        b = kernels._direct_sum(space, n, np.array([u]))[0]
        assert abs(a - b) <= 1e-10 * abs(b)
        assert kernel_trunc(space, n, z, w) == pytest.approx(b, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 0.999), st.floats(0, 2 * math.pi))
def test_monotone_exhaustion(r, t):
    z = r * np.exp(1j * t)
    for space in (B, H):
        vals = [kernel_diag(space, 2**j, z) for j in range(12)]
        assert all(b >= a * (1 - 1e-13) for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= kernels.kernel_full_diag(space, z) * (1 + 1e-12)
    if r < 0.9:
        assert kernel_diag(B, 4096, z) == pytest.approx(kernels.kernel_full_diag(B, z), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 64), st.integers(0, 2**31), st.floats(0, 1.2), st.floats(0, 2 * math.pi))
def test_reproducing_property(n, seed, r, t):
    p = random_polynomial(n, np.random.default_rng(seed))
    w = r * np.exp(1j * t)
    for space in (B, H):
        val = inner(p, kernel_polynomial(space, n, w), space)
        assert abs(val - p(w)) <= 1e-10 * max(abs(p(w)), np.abs(p.coeffs).max() * max(1, r) ** n)


def test_diagonal_is_real_and_at_least_one():
    z = 0.99 * np.exp(1j * np.linspace(0, 6, 50))
    for space in (B, H):
        k = kernel_diag(space, 30, z)
        assert k.dtype == float and np.all(k >= 1)


def test_inner_product_matches_norm():
    p = Polynomial([1, 2j, -3])
    for space in (B, H):
        assert inner(p, p, space).real == pytest.approx(norm_sq(p, space))


def test_closed_form_band_ten_thousand_pairs():
    rng = np.random.default_rng(7)
    m = 10_000
    gap = kernels.TAU * 10 ** rng.uniform(-1, 1, m)
    u = 1 - gap * np.exp(2j * np.pi * rng.uniform(0, 1, m))
    ns = rng.integers(0, 257, m)
    for space in (B, H):
        worst = 0.0
        for n in np.unique(ns):
            sel = ns == n
            a = kernels._closed_form(space, int(n), u[sel])
            b = kernels._direct_sum(space, int(n), u[sel])
            worst = max(worst, float(np.max(np.abs(a - b) / np.abs(b))))
        assert worst <= 1e-10
