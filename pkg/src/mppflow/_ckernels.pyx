# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the line reconstruction and limiter kernels.

Same conventions and arithmetic order as ``_pykernels``.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"

cdef enum:
    PAD = 6
    SCHEME_LINEAR = 0

LINEAR = SCHEME_LINEAR
WENO = 1


cdef inline double _gp(const double* h, Py_ssize_t k) noexcept nogil:
    # G'_{k+1/2}
    return ((h[k + 3] + h[k - 2]) - 8.0 * (h[k + 2] + h[k - 1]) + 37.0 * (h[k + 1] + h[k])) / 60.0


cdef inline double _indicator(double far, double near, double gp_far) noexcept nogil:
    cdef double s1 = far - near
    cdef double s2 = -3.0 * far + near + 2.0 * gp_far
    cdef double d = s1 - 4.0 * s2
    return (13.0 / 16.0) * s1 * s1 + (3.0 / 16.0) * (d * d)


cdef inline double _weno(double hm1, double h0, double hp1, double gl, double gr,
                         double eps, double cl, double cc, double cr) noexcept nogil:
    cdef double poly_l = -2.0 * hm1 + 2.0 * h0 + gl
    cdef double poly_c = (-hm1 + 5.0 * h0 + 2.0 * hp1) / 6.0
    cdef double poly_r = (h0 + 5.0 * hp1 - 2.0 * gr) / 4.0
    cdef double bl = _indicator(hm1, h0, gl)
    cdef double s1 = hp1 - hm1
    cdef double s2 = hp1 - 2.0 * h0 + hm1
    cdef double bc = 0.25 * s1 * s1 + (13.0 / 12.0) * s2 * s2
    cdef double br = _indicator(hp1, h0, gr)
    cdef double al = cl / ((eps + bl) * (eps + bl))
    cdef double ac = cc / ((eps + bc) * (eps + bc))
    cdef double ar = cr / ((eps + br) * (eps + br))
    cdef double total = al + ac + ar
    return (al * poly_l + ac * poly_c + ar * poly_r) / total


cdef void _flux_line(const double* h, const double* u, double* out, Py_ssize_t n,
                     int scheme, double eps, double cl, double cc, double cr,
                     double* hbuf, double* gbuf) noexcept nogil:
    cdef Py_ssize_t k, i
    cdef double* hp = hbuf + PAD
    cdef double* gp = gbuf + PAD
    for k in range(-PAD, n + PAD):
        hp[k] = h[(k + n * PAD) % n]
    for k in range(-3, n + 3):
        gp[k] = _gp(hp, k)
    for i in range(n):
        if 0.5 * (u[i] + u[(i + 1) % n]) > 0.0:
            if scheme == SCHEME_LINEAR:
                out[i] = (-8.0 * hp[i - 1] + 19.0 * hp[i] + 19.0 * hp[i + 1]
                          + 3.0 * gp[i - 2] - 6.0 * gp[i + 1]) / 27.0
            else:
                out[i] = _weno(hp[i - 1], hp[i], hp[i + 1], gp[i - 2], gp[i + 1], eps, cl, cc, cr)
        else:
            if scheme == SCHEME_LINEAR:
                out[i] = (-8.0 * hp[i + 2] + 19.0 * hp[i + 1] + 19.0 * hp[i]
                          + 3.0 * gp[i + 2] - 6.0 * gp[i - 1]) / 27.0
            else:
                out[i] = _weno(hp[i + 2], hp[i + 1], hp[i], gp[i + 2], gp[i - 1], eps, cl, cc, cr)


def upwind_flux_rows(const double[:, ::1] h, const double[:, ::1] u, int scheme,
                     double eps, double cl, double cc, double cr):
    """Interface fluxes along the last axis of C-contiguous ``(m, n)`` arrays."""
    cdef Py_ssize_t m = h.shape[0], n = h.shape[1], r
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double* hbuf = <double*> malloc((n + 2 * PAD) * sizeof(double))
    cdef double* gbuf = <double*> malloc((n + 2 * PAD) * sizeof(double))
    if hbuf == NULL or gbuf == NULL:
        free(hbuf)
        free(gbuf)
        raise MemoryError()
    try:
        with nogil:
            for r in range(m):
                _flux_line(&h[r, 0], &u[r, 0], &out[r, 0], n, scheme, eps, cl, cc, cr, hbuf, gbuf)
    finally:
        free(hbuf)
        free(gbuf)
    return out_arr


cdef inline double _share(double head, double total) noexcept nogil:
    if total > 0.0:
        return min(head / total, 1.0)
    return 1.0


def limiter_thetas(const double[:, ::1] rho_fo, const double[:, ::1] dh, const double[:, ::1] dg,
                   double lam_x, double lam_y, double rho_m, double rho_M):
    cdef Py_ssize_t ny = rho_fo.shape[0], nx = rho_fo.shape[1], i, j, s
    lam_arr = np.empty((4, ny, nx), dtype=np.float64)
    tx_arr = np.empty((ny, nx), dtype=np.float64)
    ty_arr = np.empty((ny, nx), dtype=np.float64)
    cdef double[:, :, ::1] lam = lam_arr
    cdef double[:, ::1] tx = tx_arr
    cdef double[:, ::1] ty = ty_arr
    cdef double f[4]
    cdef double hmax, hmin, pos, neg, smax, smin, a, b
    cdef double clamp = 0.0
    with nogil:
        for j in range(ny):
            for i in range(nx):
                f[0] = lam_x * dh[j, (i + nx - 1) % nx]
                f[1] = -lam_x * dh[j, i]
                f[2] = lam_y * dg[(j + ny - 1) % ny, i]
                f[3] = -lam_y * dg[j, i]
                hmax = rho_M - rho_fo[j, i]
                hmin = rho_fo[j, i] - rho_m
                if -hmax > clamp:
                    clamp = -hmax
                if -hmin > clamp:
                    clamp = -hmin
                if hmax < 0.0:
                    hmax = 0.0
                if hmin < 0.0:
                    hmin = 0.0
                pos = 0.0
                neg = 0.0
                for s in range(4):
                    if f[s] > 0.0:
                        pos = pos + f[s]
                    elif f[s] < 0.0:
                        neg = neg - f[s]
                smax = _share(hmax, pos)
                smin = _share(hmin, neg)
                for s in range(4):
                    if f[s] > 0.0:
                        lam[s, j, i] = smax
                    elif f[s] < 0.0:
                        lam[s, j, i] = smin
                    else:
                        lam[s, j, i] = 1.0
        for j in range(ny):
            for i in range(nx):
                a = lam[1, j, i]
                b = lam[0, j, (i + 1) % nx]
                tx[j, i] = a if a < b else b
                a = lam[3, j, i]
                b = lam[2, (j + 1) % ny, i]
                ty[j, i] = a if a < b else b
    return tx_arr, ty_arr, clamp
