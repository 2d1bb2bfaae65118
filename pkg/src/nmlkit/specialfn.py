"""Special functions used by the partition functions.

Scalar entry points validate their inputs and raise; the ``*_array``
variants are thin vectorized wrappers over the selected kernel backend and
are what the integrators call in their inner loops.
"""

import math

import numpy as np

from . import kernels
from .errors import DomainError, NumericalError, PoleError

EULER_GAMMA = 0.57721566490153286061


def log_gamma_complex(z):
    """Principal-branch log Gamma at a complex (or real) point.

    Uses the analytic continuation of log Gamma from the positive real axis,
    the same convention as ``mpmath.loggamma``. A Lanczos sum covers
    ``Re z >= 0.5``, one recurrence step covers ``0 < Re z < 0.5``, and the
    reflection formula the rest, where values agree with that convention
    modulo ``2*pi*i``. Conjugate symmetry holds exactly.

    Raises
    ------
    PoleError
        If ``z`` is a non-positive integer.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"log Gamma has a pole at z = {z.real:g}")
    return complex(kernels.loggamma(np.array([z]))[0])


def log_gamma_array(z):
    """Vectorized :func:`log_gamma_complex`; poles give ``nan``."""
    return kernels.loggamma(z)


def digamma(x):
    """Digamma function psi(x) for real ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"digamma requires x > 0, got {x!r}")
    return float(kernels.digamma(np.array([x]))[0])


def trigamma(x):
    """First derivative of digamma, for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"trigamma requires x > 0, got {x!r}")
    return float(kernels.trigamma(np.array([x]))[0])


def digamma_array(x):
    return kernels.digamma(x)


def inverse_digamma(y):
    """Solve ``psi(x) = y`` for ``x > 0``.

    Newton iteration started from ``exp(y) + 1/2`` when ``y >= -2.22`` and
    from ``-1/(y + gamma)`` otherwise, at most 50 steps.

    Raises
    ------
    NumericalError
        If the residual ``|psi(x) - y|`` is still above 1e-10.
    """
    y = float(y)
    if not math.isfinite(y):
        raise DomainError(f"inverse_digamma requires a finite argument, got {y!r}")
    x, ok = kernels.inverse_digamma(np.array([y]))
    if not ok[0]:
        raise NumericalError(f"inverse digamma did not converge at y = {y!r}")
    return float(x[0])


def inverse_digamma_array(y):
    """Vectorized :func:`inverse_digamma`; raises if any entry fails."""
    x, ok = kernels.inverse_digamma(np.asarray(y, dtype=float))
    if not np.all(ok):
        bad = np.asarray(y, dtype=float)[~ok]
        raise NumericalError(f"inverse digamma did not converge at y = {bad[:3]!r}")
    return x
