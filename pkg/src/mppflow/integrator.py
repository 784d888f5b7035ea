"""CFL control, conservative flux differences and the RK4 step with final-stage limiting."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .grid import X_AXIS, Y_AXIS, Grid2D, VelocityField
from .limiter import (
    Bounds,
    apply_limited_update,
    conservative_update,
    lf_split,
    limiter_thetas,
    potential_split,
    split_fluxes,
)
from .reconstruction import SCHEMES, WenoConfig

RK4_CFL_LIMIT = 2.0 / 3.0
RK4_WEIGHTS = (1.0, 2.0, 2.0, 1.0)


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str = "hermite_linear"
    limiter: bool = True
    cfl: float = 0.6
    weno: WenoConfig = WenoConfig()
    backend: str | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {sorted(SCHEMES)}")
        if not 0.0 < self.cfl <= RK4_CFL_LIMIT:
            raise ValueError(f"cfl = {self.cfl} outside (0, 2/3], the RK4 linear stability range")


def compute_dt(alpha_x: float, alpha_y: float, grid: Grid2D, cfl: float) -> float:
    rate = alpha_x / grid.dx + alpha_y / grid.dy
    if not rate > 0.0:
        raise ValueError("both velocity maxima are zero; nothing to transport")
    return cfl / rate


def spatial_fluxes(rho, u: VelocityField, cfg: SchemeConfig):
    """High-order edge fluxes ``(H, G)`` of ``u * rho``, swept dimension by dimension."""
    rho = np.asarray(rho, dtype=np.float64)
    code = SCHEMES[cfg.scheme]
    eps, weights = cfg.weno.epsilon, cfg.weno.linear_weights
    h_flux = kernels.upwind_flux(u.u_x * rho, u.u_x, X_AXIS, code, eps, weights, backend=cfg.backend)
    g_flux = kernels.upwind_flux(u.u_y * rho, u.u_y, Y_AXIS, code, eps, weights, backend=cfg.backend)
    return h_flux, g_flux


def tendency(rho, u: VelocityField, cfg: SchemeConfig, grid: Grid2D) -> np.ndarray:
    """Semi-discrete right-hand side ``L(rho)``."""
    h_flux, g_flux = spatial_fluxes(rho, u, cfg)
    return -(h_flux - np.roll(h_flux, 1, axis=X_AXIS)) / grid.dx - (g_flux - np.roll(g_flux, 1, axis=Y_AXIS)) / grid.dy


def first_order_fluxes(rho, u: VelocityField, grid: Grid2D):
    """Monotone flux pair: potential-based when a stream potential is known, Lax-Friedrichs otherwise."""
    if u.phi is not None:
        split = potential_split(u.phi, grid.dx, grid.dy)
    else:
        split = lf_split(u.u_x, u.u_y)
    return split_fluxes(split, rho)


@dataclass
class StageFluxes:
    h: list = field(default_factory=list)
    g: list = field(default_factory=list)

    def add(self, h_flux, g_flux):
        self.h.append(h_flux)
        self.g.append(g_flux)

    def accumulated(self):
        w = RK4_WEIGHTS
        h = (w[0] * self.h[0] + w[1] * self.h[1] + w[2] * self.h[2] + w[3] * self.h[3]) / 6.0
        g = (w[0] * self.g[0] + w[1] * self.g[1] + w[2] * self.g[2] + w[3] * self.g[3]) / 6.0
        return h, g


@dataclass
class StepResult:
    rho: np.ndarray
    theta_min: float | None = None


def rk4_step(rho_n, model, cfg: SchemeConfig, dt: float, bounds: Bounds | None = None,
             velocity: VelocityField | None = None) -> StepResult:
    """Advance one step; the velocity is rebuilt from every stage value.

    ``velocity`` may pass the already computed stage-0 field.
    """
    grid = model.grid
    bounds = bounds or model.bounds
    rho_n = np.asarray(rho_n, dtype=np.float64)
    vel0 = velocity if velocity is not None else model.velocity(rho_n)

    stages = StageFluxes()
    current, vel = rho_n, vel0
    for frac in (0.5, 0.5, 1.0, None):
        h_flux, g_flux = spatial_fluxes(current, vel, cfg)
        stages.add(h_flux, g_flux)
        if frac is None:
            break
        current = conservative_update(rho_n, h_flux, g_flux, frac * dt / grid.dx, frac * dt / grid.dy)
        vel = model.velocity(current)

    high = stages.accumulated()
    lam_x, lam_y = dt / grid.dx, dt / grid.dy
    if not cfg.limiter:
        return StepResult(conservative_update(rho_n, *high, lam_x, lam_y))

    low = first_order_fluxes(rho_n, vel0, grid)
    theta = limiter_thetas(rho_n, low, high, lam_x, lam_y, bounds, backend=cfg.backend)
    rho = apply_limited_update(rho_n, low, high, theta, lam_x, lam_y, bounds)
    return StepResult(rho, float(min(theta[0].min(), theta[1].min())))
