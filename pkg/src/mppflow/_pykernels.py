"""Numpy implementation of the hot stencil kernels.

Every line kernel works along the last axis with periodic wrap; an interface
array ``a`` holds ``a[..., i]`` at ``x_{i+1/2}``.
"""
import numpy as np

BACKEND = "numpy"

LINEAR = 0
WENO = 1


def _at(a, k):
    """``a[..., i + k]`` for every ``i`` (periodic)."""
    return np.roll(a, -k, axis=-1) if k else a


def primitive_derivative(h):
    return (
        (_at(h, 3) + _at(h, -2)) - 8.0 * (_at(h, 2) + _at(h, -1)) + 37.0 * (_at(h, 1) + h)
    ) / 60.0


def hermite_linear(h):
    gp = primitive_derivative(h)
    hm1, hp1, hp2 = _at(h, -1), _at(h, 1), _at(h, 2)
    left = (-8.0 * hm1 + 19.0 * h + 19.0 * hp1 + 3.0 * _at(gp, -2) - 6.0 * _at(gp, 1)) / 27.0
    right = (-8.0 * hp2 + 19.0 * hp1 + 19.0 * h + 3.0 * _at(gp, 2) - 6.0 * _at(gp, -1)) / 27.0
    return left, right


def _hermite_quadratic_indicator(far, near, gp_far):
    s1 = far - near
    s2 = -3.0 * far + near + 2.0 * gp_far
    return (13.0 / 16.0) * s1 * s1 + (3.0 / 16.0) * (s1 - 4.0 * s2) ** 2


def smoothness_indicators(hm1, h0, hp1, gp_left, gp_right):
    """``(beta_l, beta_c, beta_r)`` measured on the cell centred at ``h0``.

    ``gp_left``/``gp_right`` are the primitive derivatives at the outer
    interfaces of the stencil (``x_{i-3/2}`` and ``x_{i+3/2}`` for a left-biased value).
    """
    beta_l = _hermite_quadratic_indicator(hm1, h0, gp_left)
    s1 = hp1 - hm1
    s2 = hp1 - 2.0 * h0 + hm1
    beta_c = 0.25 * s1 * s1 + (13.0 / 12.0) * s2 * s2
    beta_r = _hermite_quadratic_indicator(hp1, h0, gp_right)
    return beta_l, beta_c, beta_r


def _weno_combine(hm1, h0, hp1, gp_left, gp_right, eps, weights):
    cl, cc, cr = weights
    poly_l = -2.0 * hm1 + 2.0 * h0 + gp_left
    poly_c = (-hm1 + 5.0 * h0 + 2.0 * hp1) / 6.0
    poly_r = (h0 + 5.0 * hp1 - 2.0 * gp_right) / 4.0
    beta_l, beta_c, beta_r = smoothness_indicators(hm1, h0, hp1, gp_left, gp_right)
    al = cl / (eps + beta_l) ** 2
    ac = cc / (eps + beta_c) ** 2
    ar = cr / (eps + beta_r) ** 2
    total = al + ac + ar
    return (al * poly_l + ac * poly_c + ar * poly_r) / total


def hermite_weno(h, eps=1e-6, weights=(1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0)):
    gp = primitive_derivative(h)
    hm1, hp1, hp2 = _at(h, -1), _at(h, 1), _at(h, 2)
    left = _weno_combine(hm1, h, hp1, _at(gp, -2), _at(gp, 1), eps, weights)
    # mirror image about x_{i+1/2}: centre node i+1, "far left" node i+2
    right = _weno_combine(hp2, hp1, h, _at(gp, 2), _at(gp, -1), eps, weights)
    return left, right


def upwind_flux(h, u, scheme=LINEAR, eps=1e-6, weights=(1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0)):
    """Interface flux along the last axis; left value where ``(u_i + u_{i+1})/2 > 0``."""
    h = np.asarray(h, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if scheme == LINEAR:
        left, right = hermite_linear(h)
    else:
        left, right = hermite_weno(h, eps, weights)
    return np.where(0.5 * (u + _at(u, 1)) > 0.0, left, right)


def limiter_thetas(rho_fo, dh, dg, lam_x, lam_y, rho_m, rho_M):
    """Edge scalings for the x-edges (``dh``) and y-edges (``dg``) of a ``(n_y, n_x)`` grid.

    ``dh[j, i]`` is ``H^rk - h`` at ``(i+1/2, j)``; ``dg[j, i]`` is ``G^rk - g`` at ``(i, j+1/2)``.
    Returns ``(theta_x, theta_y, clamp)`` where ``clamp`` is the largest amount a
    headroom had to be raised to zero.
    """
    f_l = lam_x * np.roll(dh, 1, axis=1)
    f_r = -lam_x * dh
    f_d = lam_y * np.roll(dg, 1, axis=0)
    f_u = -lam_y * dg
    slots = (f_l, f_r, f_d, f_u)

    head_max = rho_M - rho_fo
    head_min = rho_fo - rho_m
    clamp = max(0.0, float(-head_max.min()), float(-head_min.min()))
    head_max = np.maximum(head_max, 0.0)
    head_min = np.maximum(head_min, 0.0)

    pos = sum(np.maximum(f, 0.0) for f in slots)
    neg = sum(np.maximum(-f, 0.0) for f in slots)
    share_max = np.minimum(np.divide(head_max, pos, out=np.ones_like(pos), where=pos > 0.0), 1.0)
    share_min = np.minimum(np.divide(head_min, neg, out=np.ones_like(neg), where=neg > 0.0), 1.0)

    lam_l, lam_r, lam_d, lam_u = (
        np.minimum(np.where(f > 0.0, share_max, 1.0), np.where(f < 0.0, share_min, 1.0)) for f in slots
    )
    theta_x = np.minimum(lam_r, np.roll(lam_l, -1, axis=1))
    theta_y = np.minimum(lam_u, np.roll(lam_d, -1, axis=0))
    return theta_x, theta_y, clamp
