"""Backend selection for the hot numerical kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementation in ``_pykernels`` is used. Setting the environment
variable ``NMLKIT_PURE_PYTHON=1`` forces the numpy backend.
"""

import os

from . import _pykernels

_BACKENDS = {"python": _pykernels}
try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    _BACKENDS["cython"] = _ckernels

if os.environ.get("NMLKIT_PURE_PYTHON", "").strip() not in ("", "0") or _ckernels is None:
    _impl = _pykernels
else:
    _impl = _ckernels

BACKEND = _impl.BACKEND
loggamma = _impl.loggamma
digamma = _impl.digamma
trigamma = _impl.trigamma
inverse_digamma = _impl.inverse_digamma


def available_backends():
    """Names of the kernel backends importable in this environment."""
    return sorted(_BACKENDS)


def get_backend(name):
    """Return the kernel module registered under ``name``."""
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {available_backends()}") from None
