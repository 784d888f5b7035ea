"""First-order monotone fluxes and the parametrized MPP flux limiter.

Edge arrays follow the grid layout ``(n_y, n_x)``: an x-edge array holds
``[j, i]`` at ``(i+1/2, j)`` and a y-edge array holds ``[j, i]`` at ``(i, j+1/2)``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import X_AXIS, Y_AXIS

CLAMP_WARN_FRACTION = 1e-10


class BoundViolationError(RuntimeError):
    """Limited update left ``[rho_m, rho_M]``; indicates a limiter bug or a non-monotone first-order step."""

    def __init__(self, i, j, value, bounds):
        self.node = (int(i), int(j))
        self.value = float(value)
        self.bounds = bounds
        super().__init__(
            f"value {value!r} at node (i={i}, j={j}) outside bounds [{bounds.rho_m!r}, {bounds.rho_M!r}]"
        )


class LimiterClampWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class Bounds:
    rho_m: float
    rho_M: float

    def __post_init__(self):
        object.__setattr__(self, "rho_m", float(self.rho_m))
        object.__setattr__(self, "rho_M", float(self.rho_M))
        if not self.rho_m <= self.rho_M:
            raise ValueError(f"lower bound {self.rho_m} exceeds upper bound {self.rho_M}")

    @property
    def tolerance(self) -> float:
        return 1e-12 * max(1.0, abs(self.rho_M), abs(self.rho_m))


@dataclass
class SplitVelocities:
    """Edge velocity splitting ``U^-`` (multiplies the left/lower node) and ``U^+`` (the right/upper node)."""

    minus_x: np.ndarray
    plus_x: np.ndarray
    minus_y: np.ndarray
    plus_y: np.ndarray


def _shift(a, di=0, dj=0):
    """``a[j + dj, i + di]`` for every node (periodic)."""
    if di:
        a = np.roll(a, -di, axis=X_AXIS)
    if dj:
        a = np.roll(a, -dj, axis=Y_AXIS)
    return a


def potential_split(phi, dx: float, dy: float) -> SplitVelocities:
    """Lax-Friedrichs split of ``U = (-phi_y, phi_x)`` from one-sided potential differences."""
    phi = np.asarray(phi, dtype=np.float64)
    dphi_y = (_shift(phi, dj=1) - phi) / dy
    dphi_x = (_shift(phi, di=1) - phi) / dx
    alpha_x = float(np.max(np.abs(dphi_y)))
    alpha_y = float(np.max(np.abs(dphi_x)))
    return SplitVelocities(
        minus_x=0.5 * (alpha_x - dphi_y),
        plus_x=0.5 * (-alpha_x - _shift(dphi_y, di=1, dj=-1)),
        minus_y=0.5 * (alpha_y + dphi_x),
        plus_y=0.5 * (-alpha_y + _shift(dphi_x, di=-1, dj=1)),
    )


def lf_split(u_x, u_y) -> SplitVelocities:
    """Global Lax-Friedrichs split of node velocities, using the edge-averaged velocity."""
    u_x = np.asarray(u_x, dtype=np.float64)
    u_y = np.asarray(u_y, dtype=np.float64)
    alpha_x = float(np.max(np.abs(u_x)))
    alpha_y = float(np.max(np.abs(u_y)))
    ux_edge = 0.5 * (u_x + _shift(u_x, di=1))
    uy_edge = 0.5 * (u_y + _shift(u_y, dj=1))
    return SplitVelocities(
        minus_x=0.5 * (ux_edge + alpha_x),
        plus_x=0.5 * (ux_edge - alpha_x),
        minus_y=0.5 * (uy_edge + alpha_y),
        plus_y=0.5 * (uy_edge - alpha_y),
    )


def split_fluxes(split: SplitVelocities, rho):
    rho = np.asarray(rho, dtype=np.float64)
    h_hat = split.minus_x * rho + split.plus_x * _shift(rho, di=1)
    g_hat = split.minus_y * rho + split.plus_y * _shift(rho, dj=1)
    return h_hat, g_hat


def first_order_fluxes_potential(phi, rho, dx: float, dy: float):
    return split_fluxes(potential_split(phi, dx, dy), rho)


def first_order_fluxes_lf(u_x, u_y, rho):
    return split_fluxes(lf_split(u_x, u_y), rho)


def update_coefficients(split: SplitVelocities, lam_x: float, lam_y: float) -> np.ndarray:
    """Coefficients ``(centre, i+1, i-1, j+1, j-1)`` of the first-order update, stacked on axis 0."""
    centre = (
        1.0
        - lam_x * (split.minus_x - _shift(split.plus_x, di=-1))
        - lam_y * (split.minus_y - _shift(split.plus_y, dj=-1))
    )
    return np.stack(
        [
            centre,
            -lam_x * split.plus_x,
            lam_x * _shift(split.minus_x, di=-1),
            -lam_y * split.plus_y,
            lam_y * _shift(split.minus_y, dj=-1),
        ]
    )


def conservative_update(rho, h_flux, g_flux, lam_x: float, lam_y: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.float64)
    return (
        rho
        - lam_x * (h_flux - np.roll(h_flux, 1, axis=X_AXIS))
        - lam_y * (g_flux - np.roll(g_flux, 1, axis=Y_AXIS))
    )


def limiter_thetas(rho_n, low, high, lam_x: float, lam_y: float, bounds: Bounds, backend=None):
    """Per-edge scalings ``(theta_x, theta_y)`` in ``[0, 1]``.

    ``low`` is the first-order flux pair, ``high`` the accumulated high-order pair.
    """
    h_low, g_low = low
    h_high, g_high = high
    rho_fo = conservative_update(rho_n, h_low, g_low, lam_x, lam_y)
    theta_x, theta_y, clamp = kernels.limiter_thetas(
        rho_fo, h_high - h_low, g_high - g_low, lam_x, lam_y, bounds.rho_m, bounds.rho_M, backend=backend
    )
    # floored at the bound tolerance so roundoff on narrow bounds stays silent
    if clamp > max(CLAMP_WARN_FRACTION * (bounds.rho_M - bounds.rho_m), bounds.tolerance):
        warnings.warn(
            f"first-order update left the bounds by {clamp:.3e}; time step exceeds the monotone limit",
            LimiterClampWarning,
            stacklevel=2,
        )
    return theta_x, theta_y


def limited_fluxes(low, high, theta):
    """``theta * (high - low) + low`` per edge; edges with ``theta == 1`` take ``high`` unchanged."""
    (h_low, g_low), (h_high, g_high), (theta_x, theta_y) = low, high, theta
    h = np.where(theta_x == 1.0, h_high, theta_x * (h_high - h_low) + h_low)
    g = np.where(theta_y == 1.0, g_high, theta_y * (g_high - g_low) + g_low)
    return h, g


def check_bounds(rho, bounds: Bounds) -> None:
    tol = bounds.tolerance
    bad = (rho < bounds.rho_m - tol) | (rho > bounds.rho_M + tol)
    if np.any(bad):
        j, i = np.argwhere(bad)[0]
        raise BoundViolationError(i, j, rho[j, i], bounds)


def apply_limited_update(rho_n, low, high, theta, lam_x: float, lam_y: float, bounds: Bounds | None = None):
    h, g = limited_fluxes(low, high, theta)
    rho = conservative_update(rho_n, h, g, lam_x, lam_y)
    if bounds is not None:
        check_bounds(rho, bounds)
    return rho
