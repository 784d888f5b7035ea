"""FFT Poisson solves and spectral derivatives on periodic grids.

Sign convention everywhere: ``-Laplacian(phi) = rho - mean(rho)``, with
``phi`` normalised to zero mean.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .grid import X_AXIS, Y_AXIS, Grid2D, ScalarField

_AXES = {"x": X_AXIS, "y": Y_AXIS}


def wavenumbers(n: int, length: float) -> np.ndarray:
    """Real-FFT wavenumbers ``2 pi m / L`` for ``m = 0..n//2``."""
    return 2.0 * np.pi * np.fft.rfftfreq(n, d=length / n)


def _derivative_symbol(n: int, length: float) -> np.ndarray:
    ik = 1j * wavenumbers(n, length)
    if n % 2 == 0:
        ik[-1] = 0.0  # Nyquist mode has no odd real counterpart
    return ik


class SpectralPlan:
    """Cached wavenumbers for one grid; immutable after construction."""

    def __init__(self, grid: Grid2D):
        self.grid = grid
        self.kx = wavenumbers(grid.n_x, grid.length_x)
        self.ky = 2.0 * np.pi * np.fft.fftfreq(grid.n_y, d=grid.dy)
        k2 = self.ky[:, None] ** 2 + self.kx[None, :] ** 2
        k2[0, 0] = 1.0
        self._inv_k2 = 1.0 / k2
        self._inv_k2[0, 0] = 0.0
        self._dx_symbol = _derivative_symbol(grid.n_x, grid.length_x)
        self._dy_symbol = _derivative_symbol(grid.n_y, grid.length_y)

    def poisson(self, rho: np.ndarray) -> np.ndarray:
        rho_hat = np.fft.rfft2(rho)
        return np.fft.irfft2(rho_hat * self._inv_k2, s=self.grid.shape)

    def derivative(self, values: np.ndarray, axis: str) -> np.ndarray:
        if axis == "x":
            n, symbol = self.grid.n_x, self._dx_symbol[None, :]
        elif axis == "y":
            n, symbol = self.grid.n_y, self._dy_symbol[:, None]
        else:
            raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
        ax = _AXES[axis]
        return np.fft.irfft(np.fft.rfft(values, axis=ax) * symbol, n=n, axis=ax)

    def laplacian(self, values: np.ndarray) -> np.ndarray:
        k2 = self.ky[:, None] ** 2 + self.kx[None, :] ** 2
        return np.fft.irfft2(-k2 * np.fft.rfft2(values), s=self.grid.shape)


@lru_cache(maxsize=32)
def plan_for(grid: Grid2D) -> SpectralPlan:
    return SpectralPlan(grid)


def solve_poisson_1d(rho_line, length: float) -> np.ndarray:
    rho_line = np.asarray(rho_line, dtype=np.float64)
    n = rho_line.size
    k = wavenumbers(n, length)
    rho_hat = np.fft.rfft(rho_line)
    phi_hat = np.zeros_like(rho_hat)
    phi_hat[1:] = rho_hat[1:] / k[1:] ** 2
    return np.fft.irfft(phi_hat, n=n)


def derivative_1d(line, length: float) -> np.ndarray:
    line = np.asarray(line, dtype=np.float64)
    n = line.size
    return np.fft.irfft(np.fft.rfft(line) * _derivative_symbol(n, length), n=n)


def electric_field(phi_line, length: float) -> np.ndarray:
    """``E = -d(phi)/dx`` on a periodic line."""
    return -derivative_1d(phi_line, length)


def solve_poisson_2d(rho: ScalarField) -> ScalarField:
    return ScalarField(rho.grid, plan_for(rho.grid).poisson(rho.values))


def spectral_derivative(field: ScalarField, axis: str) -> ScalarField:
    return ScalarField(field.grid, plan_for(field.grid).derivative(field.values, axis))
