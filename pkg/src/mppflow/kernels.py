"""Backend selection for the stencil kernels.

The compiled Cython module is used when importable; set ``MPPFLOW_PURE=1``
to force the numpy fallback.
"""
import os

import numpy as np

from . import _pykernels

LINEAR = _pykernels.LINEAR
WENO = _pykernels.WENO

_ckernels = None
if os.environ.get("MPPFLOW_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "numpy"


def available_backends():
    return ["cython", "numpy"] if _ckernels is not None else ["numpy"]


def upwind_flux(h, u, axis=-1, scheme=LINEAR, eps=1e-6, weights=(1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0), backend=None):
    """Upwind interface fluxes of ``h`` along ``axis``; element ``i`` sits at ``i + 1/2``."""
    backend = backend or BACKEND
    h = np.asarray(h, dtype=np.float64)
    u = np.broadcast_to(np.asarray(u, dtype=np.float64), h.shape)
    h_last = np.moveaxis(h, axis, -1)
    u_last = np.moveaxis(u, axis, -1)
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        shape = h_last.shape
        out = _ckernels.upwind_flux_rows(
            np.ascontiguousarray(h_last.reshape(-1, shape[-1])),
            np.ascontiguousarray(u_last.reshape(-1, shape[-1])),
            scheme, eps, *weights,
        ).reshape(shape)
    else:
        out = _pykernels.upwind_flux(h_last, u_last, scheme, eps, weights)
    return np.ascontiguousarray(np.moveaxis(out, -1, axis))


def limiter_thetas(rho_fo, dh, dg, lam_x, lam_y, rho_m, rho_M, backend=None):
    backend = backend or BACKEND
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        return _ckernels.limiter_thetas(
            np.ascontiguousarray(rho_fo, dtype=np.float64),
            np.ascontiguousarray(dh, dtype=np.float64),
            np.ascontiguousarray(dg, dtype=np.float64),
            float(lam_x), float(lam_y), float(rho_m), float(rho_M),
        )
    return _pykernels.limiter_thetas(rho_fo, dh, dg, lam_x, lam_y, rho_m, rho_M)
