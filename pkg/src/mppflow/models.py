"""Physical models and benchmark cases.

Each case fixes a domain, an initial condition, analytic bounds and the
velocity construction. For Vlasov-Poisson the grid's y direction is velocity ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import Grid2D, ScalarField, VelocityField, make_grid, sample
from .limiter import Bounds
from .poisson import electric_field, plan_for, solve_poisson_1d

TWO_PI = 2.0 * np.pi
SQRT_2PI = np.sqrt(2.0 * np.pi)

KINDS = ("advection_const", "vlasov_poisson", "guiding_center", "incompressible_euler")


def velocity_constant(grid: Grid2D, u: tuple[float, float]) -> VelocityField:
    return VelocityField(np.full(grid.shape, float(u[0])), np.full(grid.shape, float(u[1])))


def charge_density(f: ScalarField) -> np.ndarray:
    """Midpoint-rule ``integral f dv`` as a line over x."""
    return f.grid.dy * f.values.sum(axis=0)


def velocity_vlasov(f: ScalarField) -> VelocityField:
    grid = f.grid
    phi = solve_poisson_1d(charge_density(f), grid.length_x)
    efield = electric_field(phi, grid.length_x)
    u_x = np.broadcast_to(grid.y[:, None], grid.shape).copy()
    u_y = np.broadcast_to(efield[None, :], grid.shape).copy()
    return VelocityField(u_x, u_y, efield=efield)


def velocity_guiding_center(rho: ScalarField) -> VelocityField:
    plan = plan_for(rho.grid)
    phi = plan.poisson(rho.values)
    return VelocityField(-plan.derivative(phi, "y"), plan.derivative(phi, "x"), phi=phi)


def velocity_euler(omega: ScalarField) -> VelocityField:
    """Vorticity-stream form shares the guiding-centre convention ``-Lap(phi) = omega``."""
    return velocity_guiding_center(omega)


@dataclass
class ModelBinding:
    kind: str
    grid: Grid2D
    bounds: Bounds
    advection: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")

    def velocity(self, rho) -> VelocityField:
        field_ = rho if isinstance(rho, ScalarField) else ScalarField(self.grid, rho)
        if self.kind == "advection_const":
            return velocity_constant(self.grid, self.advection)
        if self.kind == "vlasov_poisson":
            return velocity_vlasov(field_)
        return velocity_guiding_center(field_)

    @property
    def is_kinetic(self) -> bool:
        return self.kind == "vlasov_poisson"


# ---------------------------------------------------------------- initial data


def _maxwellian(v):
    return np.exp(-0.5 * v * v) / SQRT_2PI


def _sin4(x, y):
    return np.sin(x) ** 4 + np.sin(y) ** 4


def _chirp(x, y, t=0.0):
    s = np.mod(x - t, TWO_PI)
    return np.sin(4.0 * s * (s - TWO_PI)) + 0.0 * y


def _vp_smooth(x, v):
    return np.cos(0.5 * x) ** 4 * _maxwellian(v)


def _landau(x, v, alpha=0.5, k=0.5):
    return (1.0 + alpha * np.cos(k * x)) * _maxwellian(v)


TS_ALPHA, TS_U, TS_VTH, TS_K = 0.05, 0.99, 0.3, 2.0 / 13.0


def _two_stream_v(v):
    pref = 1.0 / (2.0 * TS_VTH * SQRT_2PI)
    return pref * (np.exp(-((v - TS_U) ** 2) / (2 * TS_VTH**2)) + np.exp(-((v + TS_U) ** 2) / (2 * TS_VTH**2)))


def _two_stream(x, v):
    return _two_stream_v(v) * (1.0 + TS_ALPHA * np.cos(TS_K * x))


BOT_NP, BOT_NB, BOT_VB, BOT_VT, BOT_ALPHA, BOT_K = 0.9, 0.2, 4.5, 0.5, 0.04, 0.3


def _bump_v(v):
    return (BOT_NP * np.exp(-0.5 * v * v) + BOT_NB * np.exp(-((v - BOT_VB) ** 2) / (2 * BOT_VT**2))) / SQRT_2PI


def _bump_on_tail(x, v):
    return _bump_v(v) * (1.0 + BOT_ALPHA * np.cos(BOT_K * x))


def _kelvin_helmholtz(x, y):
    return np.sin(y) + 0.015 * np.cos(0.5 * x)


def _euler_stationary(x, y):
    return -2.0 * np.sin(x) * np.sin(y)


def _vortex_patch(x, y):
    tol = 1e-12
    in_x = (x >= 0.5 * np.pi - tol) & (x <= 1.5 * np.pi + tol)
    lower = in_x & (y >= 0.25 * np.pi - tol) & (y <= 0.75 * np.pi + tol)
    upper = in_x & (y >= 1.25 * np.pi - tol) & (y <= 1.75 * np.pi + tol)
    return np.where(lower, -1.0, np.where(upper, 1.0, 0.0))


@dataclass(frozen=True)
class Case:
    name: str
    kind: str
    domain: tuple[float, float, float, float]
    n_x: int
    n_y: int
    t_final: float
    init: Callable
    bounds_for: Callable[[tuple], Bounds]
    exact: Callable | None = None
    advection: tuple[float, float] = (1.0, 1.0)
    long_run: bool = False
    ny_per_nx: float = 1.0
    description: str = ""


def _fixed(lo, hi):
    return lambda domain: Bounds(lo, hi)


def _far_v(domain):
    """Velocity endpoint farthest from 0, where a decaying tail is smallest."""
    return max(abs(domain[2]), abs(domain[3]))


def _case_list():
    v_cut = TWO_PI
    return [
        Case(
            "advect2d_sin4", "advection_const", (0.0, TWO_PI, 0.0, TWO_PI), 64, 64, 1.0,
            _sin4, _fixed(0.0, 2.0),
            exact=lambda x, y, t: np.sin(x - t) ** 4 + np.sin(y - t) ** 4,
            description="2D linear transport rho_t + rho_x + rho_y = 0",
        ),
        Case(
            "advect1d_chirp", "advection_const", (0.0, TWO_PI, 0.0, TWO_PI), 160, 8, 1.5,
            _chirp, _fixed(-1.0, 1.0),
            exact=lambda x, y, t: _chirp(x, y, t),
            advection=(1.0, 0.0),
            ny_per_nx=0.0,
            description="1D transport of a highly oscillatory profile (y is a dummy direction)",
        ),
        Case(
            "vp_smooth", "vlasov_poisson", (0.0, 4 * np.pi, -4 * np.pi, 4 * np.pi), 64, 128, 1.0,
            _vp_smooth, _fixed(0.0, 1.0 / SQRT_2PI),
            ny_per_nx=2.0,
            description="Vlasov-Poisson accuracy test, cos^4(kx) Maxwellian",
        ),
        Case(
            "landau_strong", "vlasov_poisson", (0.0, 4 * np.pi, -v_cut, v_cut), 256, 256, 50.0,
            _landau, lambda d: Bounds(0.5 * _maxwellian(_far_v(d)), 1.5 / SQRT_2PI),
            description="strong Landau damping, alpha = 0.5, k = 0.5",
        ),
        Case(
            "two_stream_sym", "vlasov_poisson", (0.0, TWO_PI / TS_K, -v_cut, v_cut), 256, 256, 70.0,
            _two_stream,
            lambda d: Bounds(_two_stream_v(_far_v(d)) * (1 - TS_ALPHA), _two_stream_v(TS_U) * (1 + TS_ALPHA)),
            long_run=True,
            description="symmetric two-stream instability",
        ),
        Case(
            "bump_on_tail", "vlasov_poisson", (0.0, TWO_PI / BOT_K, -3 * np.pi, 3 * np.pi), 256, 256, 1000.0,
            _bump_on_tail,
            lambda d: Bounds(min(_bump_v(d[2]), _bump_v(d[3])) * (1 - BOT_ALPHA), _bump_v(0.0) * (1 + BOT_ALPHA)),
            long_run=True,
            description="bump-on-tail instability",
        ),
        Case(
            "kelvin_helmholtz", "guiding_center", (0.0, 4 * np.pi, 0.0, TWO_PI), 256, 256, 40.0,
            _kelvin_helmholtz, _fixed(-1.015, 1.015),
            description="guiding-centre Kelvin-Helmholtz instability",
        ),
        Case(
            "euler_stationary", "incompressible_euler", (0.0, TWO_PI, 0.0, TWO_PI), 64, 64, 1.0,
            _euler_stationary, _fixed(-2.0, 2.0),
            exact=lambda x, y, t: _euler_stationary(x, y),
            description="stationary incompressible Euler solution",
        ),
        Case(
            "vortex_patch", "incompressible_euler", (0.0, TWO_PI, 0.0, TWO_PI), 256, 256, 10.0,
            _vortex_patch, _fixed(-1.0, 1.0),
            description="incompressible Euler vortex patch",
        ),
    ]


CASES: dict[str, Case] = {c.name: c for c in _case_list()}


def get_case(name: str) -> Case:
    try:
        return CASES[name]
    except KeyError:
        raise ValueError(f"unknown case {name!r}; valid cases: {', '.join(CASES)}") from None


def default_ny(case: Case, n_x: int) -> int:
    """Mesh rule used when only ``n_x`` is given (e.g. ``N_v = 2 N_x`` for the VP accuracy test)."""
    if case.ny_per_nx == 0.0:
        return case.n_y
    return int(round(case.ny_per_nx * n_x))


def case_grid(case: Case, n_x: int | None = None, n_y: int | None = None, domain=None) -> Grid2D:
    n_x = n_x or case.n_x
    n_y = n_y or default_ny(case, n_x)
    return make_grid(*(domain or case.domain), n_x, n_y)


def initial_condition(case_name: str, n_x: int | None = None, n_y: int | None = None, domain=None):
    """``(field, bounds, model)`` for a named benchmark at the requested mesh."""
    case = get_case(case_name)
    grid = case_grid(case, n_x, n_y, domain)
    rho = sample(grid, case.init)
    bounds = case.bounds_for((grid.x_min, grid.x_max, grid.y_min, grid.y_max))
    model = ModelBinding(case.kind, grid, bounds, case.advection)
    return rho, bounds, model


def exact_solution(case_name: str, grid: Grid2D, t: float) -> ScalarField | None:
    case = get_case(case_name)
    if case.exact is None:
        return None
    return sample(grid, lambda x, y: case.exact(x, y, t))

