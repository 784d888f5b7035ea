import numpy as np
import pytest

from mppflow import kernels
from mppflow.integrator import SchemeConfig, rk4_step
from mppflow.models import initial_condition

pytestmark = pytest.mark.skipif("cython" not in kernels.available_backends(), reason="compiled kernels not built")


@pytest.mark.parametrize("scheme", [kernels.LINEAR, kernels.WENO])
@pytest.mark.parametrize("axis", [0, 1])
def test_flux_kernels_bitwise(scheme, axis):
    rng = np.random.default_rng(scheme + 2 * axis)
    for shape in [(8, 8), (13, 29), (64, 7)]:
        h = rng.standard_normal(shape) * 10.0 ** rng.integers(-5, 5)
        u = rng.standard_normal(shape)
        u[0, :] = 0.0
        a = kernels.upwind_flux(h, u, axis, scheme, backend="cython")
        b = kernels.upwind_flux(h, u, axis, scheme, backend="numpy")
        assert np.array_equal(a, b)


def test_limiter_kernels_bitwise():
    rng = np.random.default_rng(1)
    for _ in range(50):
        shape = tuple(rng.integers(8, 30, 2))
        rho = rng.random(shape)
        dh, dg = rng.standard_normal((2, *shape)) * rng.uniform(0, 0.1)
        lo, hi = sorted(rng.uniform(-0.5, 1.5, 2))
        a = kernels.limiter_thetas(rho, dh, dg, 0.3, 0.2, lo, hi, backend="cython")
        b = kernels.limiter_thetas(rho, dh, dg, 0.3, 0.2, lo, hi, backend="numpy")
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]) and a[2] == b[2]


@pytest.mark.parametrize("case", ["kelvin_helmholtz", "two_stream_sym"])
def test_full_steps_bitwise(case):
    rho0, _, model = initial_condition(case, 32, 32)
    states = {}
    for backend in ("cython", "numpy"):
        rho = rho0.values
        for _ in range(5):
            rho = rk4_step(rho, model, SchemeConfig(backend=backend), 0.02).rho
        states[backend] = rho
    assert np.array_equal(states["cython"], states["numpy"])
