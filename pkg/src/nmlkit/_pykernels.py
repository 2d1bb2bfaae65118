"""Numpy implementations of the hot numerical kernels.

This module is the fallback used when the compiled ``_ckernels`` extension
is unavailable. Both backends implement identical algorithms with identical
constants, so their outputs agree to a few ulps.
"""

import numpy as np

BACKEND = "python"

# Lanczos approximation, g = 7, 9 terms.
LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_2PI = 0.91893853320467274178
LOG_PI = 1.1447298858494001741
EULER_GAMMA = 0.57721566490153286061

DIGAMMA_SHIFT = 6.0
INVDIGAMMA_MAXITER = 50
INVDIGAMMA_TOL = 1e-10


def _loggamma_right(z):
    # Re z >= 0.5
    zm = z - 1.0
    acc = np.full_like(zm, LANCZOS_COEF[0])
    for k in range(1, 9):
        acc = acc + LANCZOS_COEF[k] / (zm + k)
    t = zm + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _log_sin_pi_upper(z):
    # log sin(pi z) for Im z >= 0, modulo 2 pi i; avoids overflow of sin.
    return -1j * np.pi * z + np.log1p(-np.exp(2j * np.pi * z)) + np.log(0.5j)


def loggamma(z):
    """Vectorized complex log-gamma (analytic continuation from the real axis).

    Poles return ``nan``; callers decide whether that is an error.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    flat_z = z.ravel()
    flat = out.ravel()
    right = flat_z.real >= 0.5
    if right.any():
        flat[right] = _loggamma_right(flat_z[right])
    # 0 < Re z < 0.5: one recurrence step keeps tiny imaginary parts exact
    strip = (flat_z.real > 0.0) & ~right
    if strip.any():
        zs = flat_z[strip]
        flat[strip] = _loggamma_right(zs + 1.0) - np.log(zs)
    left = ~(right | strip)
    if left.any():
        zl = flat_z[left]
        flip = zl.imag < 0
        zu = np.where(flip, np.conj(zl), zl)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = LOG_PI - _log_sin_pi_upper(zu) - _loggamma_right(1.0 - zu)
        val = np.where(flip, np.conj(val), val)
        real_axis = zl.imag == 0
        if real_axis.any():
            xr = zl.real[real_axis]
            pole = (xr <= 0) & (xr == np.floor(xr))
            # real axis: log|Gamma| with imaginary part 0 or pi
            lg = val[real_axis].real
            sign_neg = (xr < 0) & (np.floor(xr) % 2 == 1)
            fixed = lg + 1j * np.where(sign_neg, np.pi, 0.0)
            fixed = np.where(pole, np.nan + 0j, fixed)
            val[real_axis] = fixed
        flat[left] = val
    return out


def _digamma_scalar_free(x):
    x = np.array(x, dtype=float, copy=True)
    acc = np.zeros_like(x)
    small = x < DIGAMMA_SHIFT
    while small.any():
        acc[small] -= 1.0 / x[small]
        x[small] += 1.0
        small = x < DIGAMMA_SHIFT
    f = (1.0 / x) ** 2
    series = f * (1.0 / 12 - f * (1.0 / 120 - f * (1.0 / 252 - f * (
        1.0 / 240 - f * (1.0 / 132 - f * (691.0 / 32760 - f / 12.0))))))
    return acc + np.log(x) - 0.5 / x - series


def digamma(x):
    """Vectorized digamma for x > 0 (non-positive entries give ``nan``)."""
    x = np.asarray(x, dtype=float)
    bad = ~(x > 0)
    xs = np.where(bad, 1.0, x)
    out = _digamma_scalar_free(xs)
    return np.where(bad, np.nan, out)


def trigamma(x):
    """Vectorized trigamma for x > 0."""
    x = np.array(np.asarray(x, dtype=float), copy=True)
    bad = ~(x > 0)
    x[bad] = 1.0
    acc = np.zeros_like(x)
    small = x < DIGAMMA_SHIFT
    while small.any():
        acc[small] += 1.0 / (x[small] * x[small])
        x[small] += 1.0
        small = x < DIGAMMA_SHIFT
    f = (1.0 / x) ** 2
    series = 1.0 / x + f / 2.0 + f / x * (1.0 / 6 - f * (1.0 / 30 - f * (
        1.0 / 42 - f * (1.0 / 30 - f * (5.0 / 66 - f * (691.0 / 2730 - f * 7.0 / 6))))))
    out = acc + series
    out[bad] = np.nan
    return out


def inverse_digamma(y):
    """Vectorized inverse digamma via Newton's method.

    Returns ``(x, converged)`` where ``converged`` flags ``|psi(x) - y| <= 1e-10``.
    """
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore"):
        x = np.where(y >= -2.22, np.exp(np.minimum(y, 709.0)) + 0.5, -1.0 / (y + EULER_GAMMA))
    x = np.array(x, dtype=float, ndmin=1)
    y1 = np.array(y, dtype=float, ndmin=1)
    active = np.arange(x.size)
    for _ in range(INVDIGAMMA_MAXITER):
        xa = x[active]
        step = (digamma(xa) - y1[active]) / trigamma(xa)
        x_new = xa - step
        xa = np.where(x_new <= 0, 0.5 * xa, x_new)
        x[active] = xa
        active = active[~(np.abs(step) <= 4e-16 * xa)]
        if active.size == 0:
            break
    x = x.reshape(y.shape)
    converged = np.abs(digamma(x) - y) <= INVDIGAMMA_TOL
    return x, converged
