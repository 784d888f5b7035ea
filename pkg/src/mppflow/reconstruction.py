"""Fifth-order Hermite interface reconstructions on a single periodic line.

``h`` holds point values of the flux function ``h_i = U_i rho_i``; the
reconstructions return the interface value at ``x_{i+1/2}``. Indices wrap
periodically. Whole-grid sweeps go through :mod:`mppflow.kernels`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

MIN_LINE = 7

SCHEMES = {"hermite_linear": kernels.LINEAR, "hermite_weno": kernels.WENO}


@dataclass(frozen=True)
class WenoConfig:
    epsilon: float = 1e-6
    linear_weights: tuple[float, float, float] = (1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0)

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if abs(sum(self.linear_weights) - 1.0) > 1e-14:
            raise ValueError(f"linear weights {self.linear_weights} do not sum to 1")


def _line(h) -> np.ndarray:
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 1 or h.size < MIN_LINE:
        raise ValueError(f"need a 1D line of at least {MIN_LINE} values, got shape {h.shape}")
    return h


def _get(h, k):
    return h[k % h.size]


def primitive_derivative(h, i: int) -> float:
    """Sixth-order value of the primitive's derivative at ``x_{i+1/2}``."""
    h = _line(h)
    return (
        (_get(h, i + 3) + _get(h, i - 2))
        - 8.0 * (_get(h, i + 2) + _get(h, i - 1))
        + 37.0 * (_get(h, i + 1) + _get(h, i))
    ) / 60.0


def hermite_linear_left(h, i: int) -> float:
    h = _line(h)
    return (
        -8.0 * _get(h, i - 1) + 19.0 * _get(h, i) + 19.0 * _get(h, i + 1)
        + 3.0 * primitive_derivative(h, i - 2) - 6.0 * primitive_derivative(h, i + 1)
    ) / 27.0


def hermite_linear_right(h, i: int) -> float:
    h = _line(h)
    return (
        -8.0 * _get(h, i + 2) + 19.0 * _get(h, i + 1) + 19.0 * _get(h, i)
        + 3.0 * primitive_derivative(h, i + 2) - 6.0 * primitive_derivative(h, i - 1)
    ) / 27.0


def _left_stencil(h, i):
    return (
        _get(h, i - 1), _get(h, i), _get(h, i + 1),
        primitive_derivative(h, i - 2), primitive_derivative(h, i + 1),
    )


def _right_stencil(h, i):
    # reflection of the left stencil about x_{i+1/2}
    return (
        _get(h, i + 2), _get(h, i + 1), _get(h, i),
        primitive_derivative(h, i + 2), primitive_derivative(h, i - 1),
    )


def _candidates(hm1, h0, hp1, gl, gr):
    return (
        -2.0 * hm1 + 2.0 * h0 + gl,
        (-hm1 + 5.0 * h0 + 2.0 * hp1) / 6.0,
        (h0 + 5.0 * hp1 - 2.0 * gr) / 4.0,
    )


def _indicators(hm1, h0, hp1, gl, gr):
    def hermite_quadratic(far, gp_far):
        s1 = far - h0
        s2 = -3.0 * far + h0 + 2.0 * gp_far
        return (13.0 / 16.0) * s1 * s1 + (3.0 / 16.0) * (s1 - 4.0 * s2) ** 2

    s1 = hp1 - hm1
    s2 = hp1 - 2.0 * h0 + hm1
    return hermite_quadratic(hm1, gl), 0.25 * s1 * s1 + (13.0 / 12.0) * s2 * s2, hermite_quadratic(hp1, gr)


def _weights(betas, cfg: WenoConfig):
    alphas = [c / (cfg.epsilon + b) ** 2 for c, b in zip(cfg.linear_weights, betas)]
    total = sum(alphas)
    return tuple(a / total for a in alphas)


def smoothness_indicators(h, i: int, side: str = "left") -> tuple[float, float, float]:
    """``(beta_l, beta_c, beta_r)`` for the left- (or mirrored right-) biased value at ``x_{i+1/2}``."""
    h = _line(h)
    stencil = _left_stencil(h, i) if side == "left" else _right_stencil(h, i)
    return _indicators(*stencil)


def weno_weights(h, i: int, cfg: WenoConfig = WenoConfig(), side: str = "left") -> tuple[float, float, float]:
    return _weights(smoothness_indicators(h, i, side), cfg)


def _weno(stencil, cfg):
    weights = _weights(_indicators(*stencil), cfg)
    return sum(w * p for w, p in zip(weights, _candidates(*stencil)))


def hermite_weno_left(h, i: int, cfg: WenoConfig = WenoConfig()) -> float:
    return _weno(_left_stencil(_line(h), i), cfg)


def hermite_weno_right(h, i: int, cfg: WenoConfig = WenoConfig()) -> float:
    return _weno(_right_stencil(_line(h), i), cfg)


def upwind_flux(h, u, i: int, scheme: str = "hermite_linear", cfg: WenoConfig = WenoConfig()) -> float:
    """Left-biased value if the interface velocity average is positive, else the right-biased one."""
    u = np.asarray(u, dtype=np.float64)
    positive = 0.5 * (_get(u, i) + _get(u, i + 1)) > 0.0
    if scheme == "hermite_linear":
        return hermite_linear_left(h, i) if positive else hermite_linear_right(h, i)
    if scheme == "hermite_weno":
        return hermite_weno_left(h, i, cfg) if positive else hermite_weno_right(h, i, cfg)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {sorted(SCHEMES)}")


def line_fluxes(h, u, scheme: str = "hermite_linear", cfg: WenoConfig = WenoConfig(), backend=None) -> np.ndarray:
    """All interface fluxes of one line at once."""
    h = _line(h)
    return kernels.upwind_flux(h, u, -1, SCHEMES[scheme], cfg.epsilon, cfg.linear_weights, backend=backend)
