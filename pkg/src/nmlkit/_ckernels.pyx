# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot numerical kernels.

Algorithms and constants mirror ``_pykernels`` exactly; see that module for
the reference implementation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, exp, fabs, floor, NAN, M_PI

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex clog(double complex)
    double complex cexp(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)

BACKEND = "cython"

cdef double LANCZOS_G = 7.0
cdef double[9] LANCZOS_COEF
LANCZOS_COEF[:] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double HALF_LOG_2PI = 0.91893853320467274178
cdef double LOG_PI = 1.1447298858494001741
cdef double EULER_GAMMA = 0.57721566490153286061
cdef double DIGAMMA_SHIFT = 6.0
cdef int INVDIGAMMA_MAXITER = 50
cdef double INVDIGAMMA_TOL = 1e-10


cdef inline double complex _loggamma_right(double complex z) noexcept nogil:
    cdef double complex zm = z - 1.0
    cdef double complex acc = LANCZOS_COEF[0]
    cdef int k
    for k in range(1, 9):
        acc = acc + LANCZOS_COEF[k] / (zm + k)
    cdef double complex t = zm + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (zm + 0.5) * clog(t) - t + clog(acc)


cdef inline double complex _log1p_c(double complex w) noexcept nogil:
    # log(1 + w) with the same cancellation guard numpy's log1p applies
    cdef double complex u = 1.0 + w
    if u == 1.0:
        return w
    return clog(u) * (w / (u - 1.0))


cdef double complex _loggamma_one(double complex z) noexcept nogil:
    cdef double complex zu, val, ipi
    cdef double x
    cdef bint flip
    if creal(z) >= 0.5:
        return _loggamma_right(z)
    if creal(z) > 0.0:
        # one recurrence step keeps tiny imaginary parts exact
        return _loggamma_right(z + 1.0) - clog(z)
    if cimag(z) == 0.0:
        x = creal(z)
        if x <= 0.0 and x == floor(x):
            return NAN
        zu = z
        val = LOG_PI - (-1j * M_PI * zu + _log1p_c(-cexp(2j * M_PI * zu)) + clog(0.5j)) \
            - _loggamma_right(1.0 - zu)
        if x < 0.0 and (<long> floor(x)) % 2 != 0:
            return creal(val) + 1j * M_PI
        return creal(val)
    flip = cimag(z) < 0.0
    zu = conj(z) if flip else z
    val = LOG_PI - (-1j * M_PI * zu + _log1p_c(-cexp(2j * M_PI * zu)) + clog(0.5j)) \
        - _loggamma_right(1.0 - zu)
    return conj(val) if flip else val


cdef double _digamma_one(double x) noexcept nogil:
    cdef double acc = 0.0, f, series
    if not (x > 0.0):
        return NAN
    while x < DIGAMMA_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    f = (1.0 / x) * (1.0 / x)
    series = f * (1.0 / 12 - f * (1.0 / 120 - f * (1.0 / 252 - f * (
        1.0 / 240 - f * (1.0 / 132 - f * (691.0 / 32760 - f / 12.0))))))
    return acc + log(x) - 0.5 / x - series


cdef double _trigamma_one(double x) noexcept nogil:
    cdef double acc = 0.0, f, series
    if not (x > 0.0):
        return NAN
    while x < DIGAMMA_SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    f = (1.0 / x) * (1.0 / x)
    series = 1.0 / x + f / 2.0 + f / x * (1.0 / 6 - f * (1.0 / 30 - f * (
        1.0 / 42 - f * (1.0 / 30 - f * (5.0 / 66 - f * (691.0 / 2730 - f * 7.0 / 6))))))
    return acc + series


cdef double _inverse_digamma_one(double y, bint *ok) noexcept nogil:
    cdef double x, step, x_new
    cdef int it
    if y >= -2.22:
        x = exp(y if y < 709.0 else 709.0) + 0.5
    else:
        x = -1.0 / (y + EULER_GAMMA)
    for it in range(INVDIGAMMA_MAXITER):
        step = (_digamma_one(x) - y) / _trigamma_one(x)
        x_new = x - step
        x = 0.5 * x if x_new <= 0.0 else x_new
        if fabs(step) <= 4e-16 * x:
            break
    ok[0] = fabs(_digamma_one(x) - y) <= INVDIGAMMA_TOL
    return x


def loggamma(z):
    """Vectorized complex log-gamma; poles give ``nan``."""
    cdef cnp.ndarray arr = np.ascontiguousarray(z, dtype=complex)
    cdef cnp.ndarray out = np.empty_like(arr)
    cdef double complex[::1] zin = arr.reshape(-1)
    cdef double complex[::1] zout = out.reshape(-1)
    cdef Py_ssize_t i, m = zin.shape[0]
    with nogil:
        for i in range(m):
            zout[i] = _loggamma_one(zin[i])
    return out.reshape(np.shape(z))


def digamma(x):
    """Vectorized digamma for x > 0."""
    cdef cnp.ndarray arr = np.ascontiguousarray(x, dtype=float)
    cdef cnp.ndarray out = np.empty_like(arr)
    cdef double[::1] xin = arr.reshape(-1)
    cdef double[::1] xout = out.reshape(-1)
    cdef Py_ssize_t i, m = xin.shape[0]
    with nogil:
        for i in range(m):
            xout[i] = _digamma_one(xin[i])
    return out.reshape(np.shape(x))


def trigamma(x):
    """Vectorized trigamma for x > 0."""
    cdef cnp.ndarray arr = np.ascontiguousarray(x, dtype=float)
    cdef cnp.ndarray out = np.empty_like(arr)
    cdef double[::1] xin = arr.reshape(-1)
    cdef double[::1] xout = out.reshape(-1)
    cdef Py_ssize_t i, m = xin.shape[0]
    with nogil:
        for i in range(m):
            xout[i] = _trigamma_one(xin[i])
    return out.reshape(np.shape(x))


def inverse_digamma(y):
    """Vectorized inverse digamma; returns ``(x, converged)``."""
    cdef cnp.ndarray arr = np.ascontiguousarray(y, dtype=float)
    cdef cnp.ndarray out = np.empty_like(arr)
    cdef cnp.ndarray flags = np.empty_like(arr, dtype=np.uint8)
    cdef double[::1] yin = arr.reshape(-1)
    cdef double[::1] xout = out.reshape(-1)
    cdef unsigned char[::1] fout = flags.reshape(-1)
    cdef Py_ssize_t i, m = yin.shape[0]
    cdef bint ok = 0
    with nogil:
        for i in range(m):
            xout[i] = _inverse_digamma_one(yin[i], &ok)
            fout[i] = ok
    return out.reshape(np.shape(y)), flags.astype(bool).reshape(np.shape(y))
