"""Conservative finite-difference transport with Hermite reconstructions and a maximum-principle-preserving flux limiter."""
from .grid import Grid2D, ScalarField, VelocityField, make_grid, read_snapshot, sample, write_snapshot
from .integrator import SchemeConfig, compute_dt, rk4_step
from .kernels import BACKEND
from .limiter import Bounds, BoundViolationError
from .models import CASES, exact_solution, initial_condition
from .reconstruction import WenoConfig
from .runner import ConfigError, RunConfig, converge, parse_config, run_case, simulate

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BoundViolationError", "Bounds", "CASES", "ConfigError", "Grid2D", "RunConfig", "ScalarField",
    "SchemeConfig", "VelocityField", "WenoConfig", "compute_dt", "converge", "exact_solution",
    "initial_condition", "make_grid", "parse_config", "read_snapshot", "rk4_step", "run_case", "sample",
    "simulate", "write_snapshot",
]
