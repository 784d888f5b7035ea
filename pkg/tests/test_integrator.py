import math

import numpy as np
import pytest

from mppflow.grid import ScalarField, VelocityField, make_grid, sample
from mppflow.integrator import (
    RK4_WEIGHTS,
    SchemeConfig,
    StageFluxes,
    compute_dt,
    rk4_step,
    spatial_fluxes,
    tendency,
)
from mppflow.limiter import Bounds
from mppflow.models import ModelBinding, initial_condition
from mppflow.runner import simulate

TWO_PI = 2 * math.pi


def test_compute_dt_examples():
    g = make_grid(0, 0.8, 0, 0.8, 8, 8)
    assert compute_dt(1.0, 2.0, g, 0.6) == pytest.approx(0.02)
    assert compute_dt(3.0, 0.0, g, 0.6) == pytest.approx(0.6 * 0.1 / 3.0)
    with pytest.raises(ValueError):
        compute_dt(0.0, 0.0, g, 0.6)


def test_landau_initial_rates():
    rho, _, model = initial_condition("landau_strong", 128, 128)
    vel = model.velocity(rho)
    assert vel.alpha_x == pytest.approx(TWO_PI)
    assert vel.alpha_y == pytest.approx(1.0, abs=1e-8)
    g = model.grid
    assert compute_dt(vel.alpha_x, vel.alpha_y, g, 0.6) == pytest.approx(0.6 / (vel.alpha_x / g.dx + vel.alpha_y / g.dy))


def test_scheme_config_validation():
    with pytest.raises(ValueError, match="cfl"):
        SchemeConfig(cfl=0.7)
    with pytest.raises(ValueError, match="cfl"):
        SchemeConfig(cfl=0.0)
    with pytest.raises(ValueError, match="scheme"):
        SchemeConfig(scheme="weno5")
    SchemeConfig(cfl=2.0 / 3.0)


def test_rk_weights():
    assert sum(RK4_WEIGHTS) / 6.0 == 1.0
    s = StageFluxes()
    for k in range(4):
        s.add(np.full(3, k + 1.0), np.zeros(3))
    h, _ = s.accumulated()
    assert np.allclose(h, (1 + 4 + 6 + 4) / 6.0)


def const_model(grid, u=(1.0, 1.0), bounds=Bounds(-10, 10)):
    return ModelBinding("advection_const", grid, bounds, u)


def vp_shaped_velocity(grid, rng):
    u_x = np.broadcast_to(rng.uniform(-3, 3, grid.n_y)[:, None], grid.shape).copy()
    u_y = np.broadcast_to(rng.uniform(-1, 1, grid.n_x)[None, :], grid.shape).copy()
    return VelocityField(u_x, u_y)


@pytest.mark.parametrize("scheme", ["hermite_linear", "hermite_weno"])
def test_constant_state_zero_tendency(scheme):
    g = make_grid(0, 1, 0, 2, 16, 12)
    rng = np.random.default_rng(0)
    vel = vp_shaped_velocity(g, rng)
    rho = np.full(g.shape, 0.7)
    assert np.max(np.abs(tendency(rho, vel, SchemeConfig(scheme=scheme), g))) <= 1e-12


@pytest.mark.parametrize("limiter", [True, False])
def test_constant_state_preserved_by_step(limiter):
    for case in ("advect2d_sin4", "landau_strong"):
        _, _, model = initial_condition(case, 16, 16)
        rho = np.full(model.grid.shape, 0.3)
        out = rk4_step(rho, model, SchemeConfig(limiter=limiter), 0.01, bounds=Bounds(0.3, 0.3)).rho
        assert np.max(np.abs(out - 0.3)) <= 1e-14


def test_sine_tendency_fifth_order():
    errs, ns = [], [16, 32, 64, 128]
    for n in ns:
        g = make_grid(0, TWO_PI, 0, TWO_PI, n, 8)
        rho = sample(g, lambda x, y: np.sin(x) + 0 * y)
        vel = VelocityField(np.ones(g.shape), np.zeros(g.shape))
        L = tendency(rho.values, vel, SchemeConfig(), g)
        errs.append(np.max(np.abs(L + np.cos(g.meshgrid()[0]))))
    order = -np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert order >= 4.7


def test_amplification_factor_rk4():
    # semi-discrete eigenvalue of the resolved mode, then one RK4 step vs exp(lambda_h dt)
    g = make_grid(0, TWO_PI, 0, TWO_PI, 32, 8)
    k = 3
    X = g.meshgrid()[0]
    cfg = SchemeConfig(limiter=False)
    model = const_model(g, (1.0, 0.0))
    vel = model.velocity(np.zeros(g.shape))
    s, c = np.sin(k * X), np.cos(k * X)
    L = tendency(s, vel, cfg, g)
    # L(sin) = a sin + b cos  <=>  lambda_h = a + i b acting on exp(i k x)
    a, b = np.linalg.lstsq(np.stack([s.ravel(), c.ravel()], 1), L.ravel(), rcond=None)[0]
    lam = complex(a, b)
    assert abs(lam - (-1j * k)) < 1e-2
    dts = np.array([0.2, 0.1, 0.05, 0.025])
    errs = []
    for dt in dts:
        out = rk4_step(s, model, cfg, dt).rho
        z = np.exp(lam * dt)
        expected = z.real * s + z.imag * c
        errs.append(np.max(np.abs(out - expected)))
        assert abs(z - np.exp(-1j * k * dt)) < 1e-2 * dt
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert slope >= 4.7


def test_temporal_order():
    rho0, _, model = initial_condition("advect2d_sin4", 32, 32)
    cfg = SchemeConfig(limiter=False)
    t_final = 0.5
    dts = [0.04, 0.02, 0.01]
    sols = [simulate(rho0, model, cfg, t_final, dt=dt).field.values for dt in dts]
    ref = simulate(rho0, model, cfg, t_final, dt=0.00125).field.values
    errs = [np.max(np.abs(s - ref)) for s in sols]
    order = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert order >= 3.7


@pytest.mark.filterwarnings("error::mppflow.limiter.LimiterClampWarning")
@pytest.mark.parametrize("case", ["kelvin_helmholtz", "landau_strong", "vortex_patch"])
@pytest.mark.parametrize("limiter", [True, False])
def test_mass_conservation_1000_steps(case, limiter):
    rho0, bounds, model = initial_condition(case, 16, 16)
    cfg = SchemeConfig(limiter=limiter)
    rho = rho0.values.copy()
    total0 = rho.sum()
    scale = np.abs(rho).sum()
    for _ in range(1000):
        vel = model.velocity(rho)
        dt = compute_dt(vel.alpha_x, vel.alpha_y, model.grid, cfg.cfl)
        rho = rk4_step(rho, model, cfg, dt, velocity=vel).rho
        if limiter:
            assert rho.min() >= bounds.rho_m - bounds.tolerance and rho.max() <= bounds.rho_M + bounds.tolerance
    assert abs(rho.sum() - total0) <= 1e-12 * scale


@pytest.mark.parametrize("scheme", ["hermite_linear", "hermite_weno"])
def test_limiter_inactive_far_from_bounds_is_bitwise(scheme):
    rho0, _, model = initial_condition("kelvin_helmholtz", 32, 32)
    far = Bounds(-100.0, 100.0)
    on = rk4_step(rho0.values, model, SchemeConfig(scheme=scheme, limiter=True), 0.05, bounds=far)
    off = rk4_step(rho0.values, model, SchemeConfig(scheme=scheme, limiter=False), 0.05, bounds=far)
    assert on.theta_min == 1.0
    assert np.array_equal(on.rho, off.rho)


def test_velocity_rebuilt_each_stage():
    # with a frozen velocity the coupled step would differ at O(dt^2)
    rho0, _, model = initial_condition("kelvin_helmholtz", 32, 32)
    cfg = SchemeConfig(limiter=False)
    coupled = rk4_step(rho0.values, model, cfg, 0.1).rho
    frozen_model = const_model(model.grid)
    vel = model.velocity(rho0.values)
    frozen_model.velocity = lambda rho: vel
    frozen = rk4_step(rho0.values, frozen_model, cfg, 0.1).rho
    assert np.max(np.abs(coupled - frozen)) > 1e-8


def test_spatial_fluxes_shapes():
    g = make_grid(0, 1, 0, 1, 10, 9)
    vel = VelocityField(np.ones(g.shape), -np.ones(g.shape))
    h, gg = spatial_fluxes(np.random.default_rng(0).random(g.shape), vel, SchemeConfig())
    assert h.shape == gg.shape == g.shape
    assert h.flags.c_contiguous and gg.flags.c_contiguous
    ScalarField(g, h).check_finite()
