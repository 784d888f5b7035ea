import math
from functools import lru_cache

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from mppflow import kernels
from mppflow.reconstruction import (
    WenoConfig,
    hermite_linear_left,
    hermite_linear_right,
    hermite_weno_left,
    hermite_weno_right,
    line_fluxes,
    primitive_derivative,
    smoothness_indicators,
    upwind_flux,
    weno_weights,
)

N = 12
MID = 5  # interface MID + 1/2 is far from the periodic seam


@lru_cache(maxsize=None)
def monomial_averages(p, width):
    """Exact cell averages of x**p on cells of ``width`` centred at (k - MID) * width."""
    x = sp.Symbol("x")
    w = sp.Rational(width)
    out = []
    for k in range(N):
        c = (k - MID) * w
        out.append(sp.integrate(x**p, (x, c - w / 2, c + w / 2)) / w)
    return np.array([float(v) for v in out]), float((w / 2) ** p)


def averages(coeffs, width="1/4"):
    h = np.zeros(N)
    exact = 0.0
    for p, c in enumerate(coeffs):
        avg, at_interface = monomial_averages(p, width)
        h += c * avg
        exact += c * at_interface
    return h, exact


@pytest.mark.parametrize("p", range(5))
def test_linear_exact_on_monomials(p):
    h, exact = averages([0.0] * p + [1.0])
    assert abs(hermite_linear_left(h, MID) - exact) <= 1e-12
    assert abs(hermite_linear_right(h, MID) - exact) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=5, max_size=5))
def test_linear_exact_on_quartics(coeffs):
    h, exact = averages(coeffs)
    assert abs(hermite_linear_left(h, MID) - exact) <= 1e-12
    assert abs(hermite_linear_right(h, MID) - exact) <= 1e-12


def test_primitive_derivative_examples():
    assert primitive_derivative(np.full(9, 3.5), 4) == pytest.approx(3.5, abs=1e-15)
    h = np.arange(N, dtype=float)
    assert primitive_derivative(h, MID) == pytest.approx(MID + 0.5, abs=1e-13)


def test_primitive_derivative_high_degree():
    # exact through degree five; the first nonzero error (degree six) scales as width**6
    h, exact = averages([0, 0, 0, 0, 0, 1.0], "1")
    assert abs(primitive_derivative(h, MID) - exact) <= 1e-12
    errs = []
    for width in ("1", "1/2", "1/4", "1/8"):
        h, exact = averages([0, 0, 0, 0, 0, 0, 1.0], width)
        errs.append(abs(primitive_derivative(h, MID) - exact))
    rate = np.polyfit(np.log([1, 0.5, 0.25, 0.125]), np.log(errs), 1)[0]
    assert rate >= 5.7


def test_primitive_derivative_printed_sign_form_is_inconsistent():
    # the minus-sign variant annihilates constants
    h = np.full(N, 2.0)
    i = MID
    minus = ((h[i + 3] - h[i - 2]) - 8 * (h[i + 2] - h[i - 1]) + 37 * (h[i + 1] - h[i])) / 60
    assert minus == 0.0
    assert primitive_derivative(h, i) == pytest.approx(2.0)


@pytest.mark.parametrize("c", [0.0, 1.0, -3.25, 1e5])
def test_constants_reproduced(c):
    h = np.full(N, c)
    tol = 1e-15 * max(1.0, abs(c)) * 10
    for fn in (hermite_linear_left, hermite_linear_right, hermite_weno_left, hermite_weno_right):
        assert abs(fn(h, MID) - c) <= tol
    assert smoothness_indicators(h, MID) == (0.0, 0.0, 0.0)
    assert weno_weights(h, MID) == pytest.approx((1 / 9, 4 / 9, 4 / 9), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(0, N - 1))
def test_mirror_identity(seed, i):
    h = np.random.default_rng(seed).standard_normal(N)
    rev = h[::-1].copy()
    # interface i + 1/2 maps to N - 2 - i + 1/2 on the reversed line
    k = N - 2 - i
    assert hermite_linear_right(h, i) == pytest.approx(hermite_linear_left(rev, k), abs=1e-13)
    assert hermite_weno_right(h, i) == pytest.approx(hermite_weno_left(rev, k), abs=1e-13)
    # indicators are symmetric about the cell centre x_i, which maps to N - 1 - i
    _, _, beta_r = smoothness_indicators(h, i, "left")
    beta_l_rev, _, _ = smoothness_indicators(rev, N - 1 - i, "left")
    assert beta_r == pytest.approx(beta_l_rev, rel=1e-12, abs=1e-13)


def test_beta_quadratic_oracle():
    h, _ = averages([0, 0, 1.0], "1")
    beta_l, _, _ = smoothness_indicators(h, MID)
    assert beta_l == pytest.approx(13.0 / 3.0, abs=1e-12)


def test_beta_matches_integral_definition():
    # Hermite quadratic on the left sub-stencil: cell averages h_{i-1}, h_i and G' at x_{i-3/2};
    # beta = integral over cell i of dx (p')^2 + dx^3 (p'')^2
    x = sp.Symbol("x")
    a0, a1, a2 = sp.symbols("a0 a1 a2")
    p = a0 + a1 * x + a2 * x**2
    hm1, h0, g = sp.symbols("hm1 h0 g")
    eqs = [
        sp.integrate(p, (x, -sp.Rational(3, 2), -sp.Rational(1, 2))) - hm1,
        sp.integrate(p, (x, -sp.Rational(1, 2), sp.Rational(1, 2))) - h0,
        p.subs(x, -sp.Rational(3, 2)) - g,
    ]
    sol = sp.solve(eqs, (a0, a1, a2))
    q = p.subs(sol)
    beta = sp.integrate(sp.diff(q, x) ** 2 + sp.diff(q, x, 2) ** 2, (x, -sp.Rational(1, 2), sp.Rational(1, 2)))
    s1 = hm1 - h0
    s2 = -3 * hm1 + h0 + 2 * g
    formula = sp.Rational(13, 16) * s1**2 + sp.Rational(3, 16) * (s1 - 4 * s2) ** 2
    assert sp.simplify(beta - formula) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_weno_weights_are_convex(seed):
    h = np.random.default_rng(seed).standard_normal(N) * 10
    w = weno_weights(h, MID, WenoConfig())
    assert all(0.0 <= wk <= 1.0 for wk in w)
    assert sum(w) == pytest.approx(1.0, abs=1e-15)


def sin_interface_errors(fn, ns):
    errs = []
    for n in ns:
        dx = 2 * math.pi / n
        x = np.arange(n) * dx
        # cell averages of sin over [x - dx/2, x + dx/2]
        h = (np.cos(x - dx / 2) - np.cos(x + dx / 2)) / dx
        exact = np.sin(x + dx / 2)
        errs.append(max(abs(fn(h, i) - exact[i]) for i in range(n)))
    return errs


def fitted_order(ns, errs):
    return -np.polyfit(np.log(ns), np.log(errs), 1)[0]


def test_linear_fifth_order_on_sine():
    ns = [16, 32, 64, 128, 256]
    for fn in (hermite_linear_left, hermite_linear_right):
        assert fitted_order(ns, sin_interface_errors(fn, ns)) >= 4.7


def test_primitive_derivative_sixth_order_on_sine():
    ns = [16, 32, 64, 128]
    assert fitted_order(ns, sin_interface_errors(primitive_derivative, ns)) >= 5.7


def test_weno_close_to_linear_on_smooth_data():
    ns = [32, 64, 128, 256]
    diffs = []
    for n in ns:
        dx = 2 * math.pi / n
        h = np.sin(np.arange(n) * dx)
        diffs.append(max(abs(hermite_weno_left(h, i) - hermite_linear_left(h, i)) for i in range(n)))
    assert fitted_order(ns, diffs) >= 2.7


def test_upwind_choice():
    h = np.random.default_rng(3).standard_normal(N)
    assert upwind_flux(h, np.ones(N), MID) == hermite_linear_left(h, MID)
    assert upwind_flux(h, -np.ones(N), MID) == hermite_linear_right(h, MID)
    u = np.zeros(N)
    u[MID], u[MID + 1] = 1.0, -1.0
    assert upwind_flux(h, u, MID) == hermite_linear_right(h, MID)
    assert upwind_flux(h, np.ones(N), MID, "hermite_weno") == hermite_weno_left(h, MID)


@pytest.mark.parametrize("scheme", ["hermite_linear", "hermite_weno"])
@pytest.mark.parametrize("backend", kernels.available_backends())
def test_line_sweep_matches_pointwise(scheme, backend):
    rng = np.random.default_rng(7)
    h = rng.standard_normal(17)
    u = rng.standard_normal(17)
    swept = line_fluxes(h, u, scheme, backend=backend)
    pointwise = [upwind_flux(h, u, i, scheme) for i in range(17)]
    assert np.allclose(swept, pointwise, rtol=0, atol=1e-13)


def test_weno_config_validation():
    with pytest.raises(ValueError):
        WenoConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        WenoConfig(linear_weights=(0.5, 0.5, 0.5))
