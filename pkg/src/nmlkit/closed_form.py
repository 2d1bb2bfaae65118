"""Closed-form LPC rows and the large-sample asymptotic formula.

Two families of rows have elementary LPCs:

* fixed-variance type (Gaussian mean), where the MLE sum is normal and the
  diagonal density is ``sqrt(n / (2 pi D))`` for every ``mu``;
* exponential type, where ``Z(eta) = const * (-eta)^(-m)`` so the MLE sum is
  gamma distributed and the diagonal density is
  ``(C n)^(m n) exp(-C n) / (Gamma(m n) mu)``.

The gamma family with known scale has no elementary form and is evaluated
by :func:`nmlkit.fourier_engine.lpc_gamma_known_scale`.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigError, DomainError, NoClosedForm
from .fourier_engine import PCResult
from .models import ModelSpec, fisher_info
from .quadrature import DEFAULT_CONFIG, integrate_1d

FAMILIES = ("fixed-variance", "exponential-type", "chi-squared-type")


@dataclass(frozen=True)
class ClosedFormFamily:
    """Row constants: ``D`` for fixed-variance rows, ``C`` and ``m`` otherwise."""

    family: str
    C: float = math.nan
    m: float = math.nan
    D: float = math.nan

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown closed-form family {self.family!r}")
        if self.family == "fixed-variance" and not self.D > 0:
            raise ConfigError("fixed-variance rows need D > 0")
        if self.family == "exponential-type" and not (self.C > 0 and self.m > 0):
            raise ConfigError("exponential-type rows need C > 0 and m > 0")

    @classmethod
    def for_model(cls, model_id, fixed_params=None):
        """Pinned constants for a registry row."""
        p = fixed_params or {}
        if model_id == "normal-known-variance":
            return cls("fixed-variance", D=float(p.get("sigma2", 1.0)))
        if model_id in ("laplace-known-mean", "weibull-known-shape"):
            return cls("exponential-type", C=1.0, m=1.0)
        if model_id == "gamma-known-shape":
            kappa = float(p.get("kappa", 1.0))
            return cls("exponential-type", C=kappa, m=kappa)
        if model_id == "normal-known-mean":
            return cls("exponential-type", C=0.5, m=0.5)
        if model_id == "gamma-known-scale":
            return cls("chi-squared-type")
        raise ConfigError(f"no closed-form row for model {model_id!r}")


def _weight_integral(w, transform=None):
    """``int w(mu) dmu`` (or ``int w(mu) / mu dmu`` with ``transform='inv'``)."""
    if w.is_zero:
        return 0.0
    (lo, hi), = w.box
    if w.kind == "indicator":
        if transform == "inv":
            return math.log(hi / lo)
        return hi - lo
    if transform == "inv":
        res = integrate_1d(lambda u: w(np.exp(u)), (math.log(lo) if lo > 0 else -math.inf,
                                                  math.log(hi) if math.isfinite(hi) else math.inf))
    else:
        res = integrate_1d(lambda m: w(m), (lo, hi))
    if not math.isfinite(res.value):
        raise DomainError("luckiness weight is not integrable")
    return res.value


def _log(x):
    return math.log(x) if x > 0 else -math.inf


def log_lpc_fixed_variance(sigma2, w, n):
    """``log int w + (1/2) log(n / (2 pi sigma2))``."""
    if not sigma2 > 0:
        raise ConfigError("sigma2 must be > 0")
    if n < 1:
        raise ConfigError("n must be >= 1")
    return _log(_weight_integral(w)) + 0.5 * math.log(n / (2.0 * math.pi * sigma2))


def log_lpc_exponential_type(C, m, w, n):
    """``m n log(C n) - C n - log Gamma(m n) + log int w(mu) / mu dmu``.

    ``w`` must be supported in ``(0, inf)``; for an indicator of ``[a, b]``
    the weight term is ``log log(b / a)``.
    """
    if not (C > 0 and m > 0):
        raise ConfigError("C and m must be > 0")
    if n < 1:
        raise ConfigError("n must be >= 1")
    if not w.is_zero:
        (a, b), = w.box
        if not b > a:
            raise ConfigError(f"window needs b > a, got [{a}, {b}]")
        if a < 0:
            raise ConfigError("exponential-type windows must lie in (0, inf)")
    mn = m * n
    return mn * math.log(C * n) - C * n - math.lgamma(mn) + _log(_weight_integral(w, "inv"))


def log_lpc_table1(spec, n):
    """Closed-form log LPC for a :class:`ModelSpec` row.

    Raises
    ------
    NoClosedForm
        For the gamma family with known scale.
    """
    row = ClosedFormFamily.for_model(spec.model_id, spec.fixed_params)
    w = spec.luckiness
    if row.family == "chi-squared-type":
        raise NoClosedForm(
            "gamma-known-scale has no elementary LPC; use fourier_engine.lpc_gamma_known_scale"
        )
    if w.is_zero:
        return PCResult.zero_weight("closed_form", n)
    if row.family == "fixed-variance":
        value = log_lpc_fixed_variance(row.D, w, n)
    else:
        value = log_lpc_exponential_type(row.C, row.m, w, n)
    return PCResult(value, "closed_form", 0.0, int(n), {"family": row.family, "C": row.C, "m": row.m, "D": row.D})


def log_lpc_asymptotic(model, w, n, cfg=None):
    """``(d/2) log(n / 2 pi) + log int w(mu) sqrt(det I(mu)) dmu``.

    Fisher information is taken in the expectation parameterization from
    :func:`nmlkit.models.fisher_info`. Half-line supports are integrated in
    ``log mu``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if n < 1:
        raise ConfigError("n must be >= 1")
    if w.is_zero:
        return PCResult.zero_weight("asymptotic", n)
    if model.param_dim != 1:
        raise ConfigError("asymptotic formula is implemented for one-parameter models")
    w.check_against(model)
    (lo, hi), = w.box

    def root_det(mus):
        return np.array([math.sqrt(float(np.linalg.det(np.atleast_2d(fisher_info(model, m))))) for m in mus])

    dlo, dhi = model.expectation_domain[0]
    if dlo == 0.0 and math.isinf(dhi):
        def f(u):
            mus = np.exp(u)
            return w(mus) * root_det(mus) * mus

        res = integrate_1d(f, (_log(lo), math.log(hi) if math.isfinite(hi) else math.inf),
                           cfg.replace(rel_tol=max(cfg.rel_tol, 1e-9)))
    else:
        res = integrate_1d(lambda m: w(m) * root_det(m), (lo, hi), cfg.replace(rel_tol=max(cfg.rel_tol, 1e-9)))
    d = model.param_dim
    value = 0.5 * d * math.log(n / (2.0 * math.pi)) + math.log(res.value)
    # finite-difference Fisher information carries ~1e-8 relative noise
    err = res.error_estimate / res.value + 1e-7
    return PCResult(value, "asymptotic", err, int(n), {"weight_integral": res.value})


def spec_lpc(spec, n, method="auto", cfg=None):
    """Dispatch a ModelSpec to a log-LPC method.

    ``auto`` prefers the closed form and falls back to Fourier inversion.
    """
    from . import fourier_engine

    if method not in ("auto", "closed_form", "fourier", "asymptotic"):
        raise ConfigError(f"unknown method {method!r}")
    if method in ("auto", "closed_form"):
        try:
            return log_lpc_table1(spec, n)
        except NoClosedForm:
            if method == "closed_form":
                raise
    model = spec.model()
    if method == "asymptotic":
        return log_lpc_asymptotic(model, spec.luckiness, n, cfg)
    if spec.model_id == "gamma-known-scale" and not spec.luckiness.is_zero:
        return fourier_engine.lpc_gamma_known_scale(model.fixed_params["beta"], spec.luckiness, n, cfg)
    return fourier_engine.lpc_fourier(model, spec.luckiness, n, cfg)


__all__ = [
    "ClosedFormFamily",
    "ModelSpec",
    "log_lpc_fixed_variance",
    "log_lpc_exponential_type",
    "log_lpc_table1",
    "log_lpc_asymptotic",
    "spec_lpc",
]
