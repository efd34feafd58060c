import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magrobot.numerics import (NoBracketError, NumericalError, cel, elliptic_ke, find_root,
                               gauss_legendre, grad_central)
from magrobot.magnetostatics import b_dipole
from magrobot.model import MU0, CylMagnet


# --- elliptic integrals ------------------------------------------------------

def test_ke_at_zero_is_half_pi():
    k, e = elliptic_ke(0.0)
    assert k == pytest.approx(math.pi / 2, rel=1e-15)
    assert e == pytest.approx(math.pi / 2, rel=1e-15)


@pytest.mark.parametrize("m", [0.1, 0.5, 0.9, 0.99, 0.9999])
def test_ke_matches_mpmath(m):
    k, e = elliptic_ke(m)
    assert k == pytest.approx(float(mpmath.ellipk(m)), rel=1e-12)
    assert e == pytest.approx(float(mpmath.ellipe(m)), rel=1e-12)


def test_ke_frozen_half():
    k, e = elliptic_ke(0.5)
    assert k == pytest.approx(1.854074677, abs=1e-9)
    assert e == pytest.approx(1.350643881, abs=1e-9)


def test_ke_near_one_is_large_and_finite():
    k, e = elliptic_ke(0.9999)
    assert np.isfinite(k) and k > 4.0
    assert e == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize("m", [-0.1, 1.0, 1.5, float("nan")])
def test_ke_domain(m):
    with pytest.raises(ValueError):
        elliptic_ke(m)


def test_ke_monotone():
    m = np.linspace(0.0, 0.999, 1000)
    k, e = elliptic_ke(m)
    assert np.all(np.diff(k) > 0)
    assert np.all(np.diff(e) < 0)


def test_ke_vectorised_matches_scalar():
    m = np.array([0.0, 0.3, 0.7])
    k, e = elliptic_ke(m)
    for i, mi in enumerate(m):
        assert (k[i], e[i]) == pytest.approx(elliptic_ke(float(mi)), rel=1e-15)


@given(st.floats(0.001, 0.999))
def test_legendre_relation(m):
    # E K' + E' K - K K' = pi / 2
    k, e = elliptic_ke(m)
    kp, ep = elliptic_ke(1.0 - m)
    assert e * kp + ep * k - k * kp == pytest.approx(math.pi / 2, rel=1e-10)


@given(st.floats(0.01, 0.99))
def test_cel_reduces_to_k_and_e(m):
    kc = math.sqrt(1.0 - m)
    k, e = elliptic_ke(m)
    assert float(cel(kc, 1.0, 1.0, 1.0)) == pytest.approx(k, rel=1e-12)
    assert float(cel(kc, 1.0, 1.0, kc * kc)) == pytest.approx(e, rel=1e-12)


@given(st.floats(0.05, 0.95), st.floats(0.01, 3.0))
def test_cel_third_kind_matches_mpmath(m, p):
    # cel(kc, p, 1, 1) = Pi(1 - p, m)
    kc = math.sqrt(1.0 - m)
    assert float(cel(kc, p, 1.0, 1.0)) == pytest.approx(float(mpmath.ellippi(1.0 - p, m)), rel=1e-9)


def test_cel_kc_zero_raises():
    with pytest.raises(NumericalError):
        cel(0.0, 1.0, 1.0, 1.0)


# --- Gauss-Legendre ------------------------------------------------------------

def test_gl_order_one():
    r = gauss_legendre(1)
    assert r.nodes.tolist() == [0.0]
    assert r.weights.tolist() == [2.0]


def test_gl_order_two_integrates_x2():
    r = gauss_legendre(2)
    assert np.dot(r.weights, r.nodes**2) == pytest.approx(2 / 3, rel=1e-15)


def test_gl_cos():
    r = gauss_legendre(8)
    assert np.dot(r.weights, np.cos(r.nodes)) == pytest.approx(2 * math.sin(1.0), abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 32])
def test_gl_structure(n):
    r = gauss_legendre(n)
    assert len(r.nodes) == n
    assert r.weights.sum() == pytest.approx(2.0, abs=1e-12)
    assert np.all(np.diff(r.nodes) > 0)
    np.testing.assert_array_equal(r.nodes, -r.nodes[::-1])
    assert np.all(r.weights > 0)
    assert not r.nodes.flags.writeable


@given(st.integers(1, 32), st.data())
def test_gl_exact_for_polynomials(n, data):
    d = data.draw(st.integers(0, 2 * n - 1))
    r = gauss_legendre(n)
    exact = 0.0 if d % 2 else 2.0 / (d + 1)
    assert np.dot(r.weights, r.nodes**d) == pytest.approx(exact, abs=1e-12)


def test_gl_scaled():
    x, w = gauss_legendre(4).scaled(1.0, 3.0)
    assert np.dot(w, x**3) == pytest.approx((81 - 1) / 4, rel=1e-13)


@pytest.mark.parametrize("n", [0, -1])
def test_gl_bad_order(n):
    with pytest.raises(ValueError):
        gauss_legendre(n)


# --- central differences -------------------------------------------------------

def test_grad_affine():
    a = np.array([1.5, -2.0, 0.25])

    def f(x):
        return x @ a + 3.0

    g = grad_central(f, np.array([0.3, 0.7, -1.1]), 1e-3)
    np.testing.assert_allclose(g, a, atol=1e-9)


def test_grad_quadratic():
    g = grad_central(lambda x: x[..., 0] ** 2, np.array([1.0, 0.0, 0.0]), 1e-4)
    np.testing.assert_allclose(g, [2.0, 0.0, 0.0], atol=1e-10)


def _dipole_b2_grad(m, r):
    k = MU0 / (4 * np.pi)
    rn = np.linalg.norm(r)
    md = m @ r
    return k**2 * (6 * md * m / rn**8 - 24 * md**2 * r / rn**10 - 6 * (m @ m) * r / rn**8)


def test_grad_of_dipole_b2_matches_analytic():
    rng = np.random.default_rng(3)
    mag = CylMagnet([0, 0, 0], [0, 0, 1], 1.25e-4, 2.5e-4, 1.2 / MU0)

    def b2(x):
        return np.sum(b_dipole(mag, x) ** 2, axis=-1)

    for _ in range(10):
        d = rng.normal(size=3)
        p = d / np.linalg.norm(d) * rng.uniform(1e-3, 3e-3)
        g = grad_central(b2, p, 1e-6)
        ref = _dipole_b2_grad(mag.moment, p)
        assert np.linalg.norm(g - ref) < 1e-4 * np.linalg.norm(ref)


def test_grad_second_order_convergence():
    def f(x):
        return np.sin(x[..., 0]) * np.exp(x[..., 1]) * np.cos(x[..., 2])

    p = np.array([0.4, -0.3, 0.9])
    x, y, z = p
    exact = np.array([np.cos(x) * np.exp(y) * np.cos(z),
                      np.sin(x) * np.exp(y) * np.cos(z),
                      -np.sin(x) * np.exp(y) * np.sin(z)])
    e1 = np.linalg.norm(grad_central(f, p, 1e-2) - exact)
    e2 = np.linalg.norm(grad_central(f, p, 5e-3) - exact)
    assert 3.6 <= e1 / e2 <= 4.4


def test_grad_nonfinite_raises():
    with pytest.raises(NumericalError):
        grad_central(lambda x: np.full(x.shape[:-1], np.nan), np.zeros(3), 1e-6)


def test_grad_bad_step():
    with pytest.raises(ValueError):
        grad_central(lambda x: x[..., 0], np.zeros(3), 0.0)


# --- root finding --------------------------------------------------------------

def test_root_linear():
    assert find_root(lambda x: x - 1.0, 0.0, 3.0, 1e-12) == pytest.approx(1.0, abs=1e-12)


def test_root_sqrt2():
    assert abs(find_root(lambda x: x * x - 2.0, 0.0, 2.0, 1e-10) - math.sqrt(2)) <= 1e-10


def test_root_no_bracket():
    with pytest.raises(NoBracketError):
        find_root(lambda x: x * x + 1.0, -1.0, 1.0, 1e-10)


def test_root_at_endpoint():
    assert find_root(lambda x: x, 0.0, 1.0, 1e-12) == 0.0


@settings(max_examples=60)
@given(st.floats(-5, 5), st.floats(0.1, 3), st.floats(1e-12, 1e-6))
def test_root_within_tol_of_true_root(r, scale, tol):
    # monotone cubic with a single real root at r
    def f(x):
        return scale * ((x - r) ** 3 + (x - r))

    x = find_root(f, r - 7.3, r + 11.1, tol)
    assert abs(x - r) <= tol
