"""Exponential-family models, luckiness weights and the model registry.

Every model is parameterized by its expectation parameter ``mu = E[T(x)]``.
Densities have the canonical form ``h(x) exp(eta T(x)) / Z(eta)`` and the
log-partition function accepts complex ``eta`` so that characteristic
functions ``Z(eta + i w / n) / Z(eta)`` can be formed directly.

Registered models (one per row of the usual exponential-family table):

=======================  ==========  ===============  ===================
model id                 T(x)        eta(mu)          Z(eta)
=======================  ==========  ===============  ===================
normal-known-variance    x           mu / s2          sqrt(2 pi s2) e^{s2 eta^2 / 2}
normal-known-mean        (x - m)^2   -1 / (2 mu)      sqrt(pi / -eta)
laplace-known-mean       |x - m|     -1 / mu          2 / -eta
gamma-known-shape        x           -k / mu          Gamma(k) (-eta)^-k
weibull-known-shape      x^k         -1 / mu          1 / -eta
gamma-known-scale        log x       invpsi(mu - log b) - 1   Gamma(eta + 1) b^(eta + 1)
=======================  ==========  ===============  ===================

The principal branch of ``log`` is safe everywhere along ``eta + i w / n``:
the first five rows keep ``Re(-eta) > 0`` (or are entire) and the last keeps
``Re(eta + 1) > 0``.
"""

from dataclasses import dataclass, field
import math
from statistics import NormalDist
from typing import Callable

import numpy as np
from scipy import special as sp_special

from .errors import ConfigError, DataError, DomainError, NumericalError
from .specialfn import digamma_array, inverse_digamma_array, log_gamma_array

_STD_NORMAL = NormalDist()
_LOG_2 = math.log(2.0)
_LOG_PI = math.log(math.pi)


def _as_complex(eta):
    return np.asarray(eta, dtype=complex)


@dataclass(frozen=True)
class ExpFamilyModel:
    """A (one- or low-dimensional) exponential family in expectation coordinates.

    All callables are vectorized over numpy arrays. For ``param_dim == 1``
    parameters are plain arrays; for ``param_dim > 1`` the last axis indexes
    the coordinate.
    """

    model_id: str
    fixed_params: dict
    param_dim: int
    data_dim: int
    canonical_domain: tuple
    expectation_domain: tuple
    data_domain: tuple
    log_partition: Callable
    sufficient_stat: Callable
    log_base_measure: Callable
    eta_of_mu: Callable
    mu_of_eta: Callable
    char_decay_exponent: float
    sample: Callable
    quantile: Callable | None = None
    label: str = ""
    table_row: dict = field(default_factory=dict)

    def __repr__(self):
        params = ", ".join(f"{k}={v:g}" for k, v in self.fixed_params.items())
        return f"ExpFamilyModel({self.model_id}{', ' + params if params else ''})"

    # -- domain checks -----------------------------------------------------

    def in_expectation_domain(self, mu):
        mu = np.asarray(mu, dtype=float)
        if self.param_dim > 1:
            ok = np.ones(mu.shape[:-1], dtype=bool)
            for j, (lo, hi) in enumerate(self.expectation_domain):
                ok &= (mu[..., j] > lo) & (mu[..., j] < hi)
            return ok
        lo, hi = self.expectation_domain[0]
        return (mu > lo) & (mu < hi)

    def check_mu(self, mu):
        mu = np.asarray(mu, dtype=float)
        inside = self.in_expectation_domain(mu)
        if not np.all(inside):
            if self.param_dim > 1:
                for j, (lo, hi) in enumerate(self.expectation_domain):
                    col = mu[..., j]
                    if not np.all((col > lo) & (col < hi)):
                        raise DomainError(
                            f"{self.model_id}: mu[{j}] outside expectation domain ({lo}, {hi})"
                        )
            lo, hi = self.expectation_domain[0]
            bad = np.atleast_1d(mu)[~np.atleast_1d(inside)][0]
            raise DomainError(f"{self.model_id}: mu[0] = {bad!r} outside expectation domain ({lo}, {hi})")
        return mu

    def check_data(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(len(x), -1) if x.ndim > 1 else x.reshape(-1, 1)
        finite = np.all(np.isfinite(flat), axis=1)
        inside = finite.copy()
        for j, (lo, hi) in enumerate(self.data_domain):
            col = flat[:, j % flat.shape[1]]
            inside &= (col > lo) & (col < hi)
        if not np.all(inside):
            idx = int(np.flatnonzero(~inside)[0])
            raise DataError(
                f"{self.model_id}: record {idx} (value {float(x[idx]):g}) outside data domain {self.data_domain}",
                index=idx,
            )
        return x


# ---------------------------------------------------------------------------
# Luckiness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Luckiness:
    """Nonnegative weight on expectation parameters.

    ``kind="indicator"`` is 1 on the closed ``box`` and 0 elsewhere;
    ``kind="smooth"`` evaluates ``weight`` and is integrated over ``box``
    (which may be infinite). ``kind="zero"`` is identically 0.
    """

    kind: str
    box: tuple = ()
    weight: Callable | None = None

    def __post_init__(self):
        if self.kind not in ("indicator", "smooth", "zero"):
            raise ConfigError(f"unknown luckiness kind {self.kind!r}")
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        object.__setattr__(self, "box", box)
        for lo, hi in box:
            if not lo < hi:
                raise ConfigError(f"luckiness box needs lo < hi, got [{lo}, {hi}]")
        if self.kind == "smooth" and self.weight is None:
            raise ConfigError("smooth luckiness needs a weight function")

    @classmethod
    def indicator(cls, lo, hi):
        """Indicator of the closed interval ``[lo, hi]``."""
        return cls("indicator", ((lo, hi),))

    @classmethod
    def box_indicator(cls, box):
        return cls("indicator", tuple(box))

    @classmethod
    def smooth(cls, weight, support):
        return cls("smooth", tuple(support), weight)

    @classmethod
    def zero(cls):
        return cls("zero")

    @property
    def is_zero(self):
        return self.kind == "zero"

    def __call__(self, mu):
        mu = np.asarray(mu, dtype=float)
        if self.kind == "zero":
            return np.zeros(mu.shape if len(self.box) <= 1 else mu.shape[:-1])
        if self.kind == "indicator":
            if len(self.box) == 1:
                lo, hi = self.box[0]
                return ((mu >= lo) & (mu <= hi)).astype(float)
            ok = np.ones(mu.shape[:-1], dtype=bool)
            for j, (lo, hi) in enumerate(self.box):
                ok &= (mu[..., j] >= lo) & (mu[..., j] <= hi)
            return ok.astype(float)
        w = np.asarray(self.weight(mu), dtype=float)
        if len(self.box) == 1:
            lo, hi = self.box[0]
            return np.where((mu >= lo) & (mu <= hi), w, 0.0)
        return w

    def check_against(self, model):
        """Raise ConfigError unless the box fits inside the expectation domain."""
        if self.kind != "indicator":
            return
        if len(self.box) != model.param_dim:
            raise ConfigError(
                f"luckiness box has {len(self.box)} coordinates, model {model.model_id} has {model.param_dim}"
            )
        for j, ((lo, hi), (dlo, dhi)) in enumerate(zip(self.box, model.expectation_domain)):
            if not (lo > dlo and hi < dhi):
                raise ConfigError(
                    f"luckiness window [{lo}, {hi}] for coordinate {j} is not strictly inside "
                    f"the expectation domain ({dlo}, {dhi}) of {model.model_id}"
                )


# ---------------------------------------------------------------------------
# Model rows
# ---------------------------------------------------------------------------

def _normal_known_variance(sigma2):
    half_log = 0.5 * math.log(2.0 * math.pi * sigma2)
    sd = math.sqrt(sigma2)
    return ExpFamilyModel(
        model_id="normal-known-variance",
        fixed_params={"sigma2": sigma2},
        param_dim=1,
        data_dim=1,
        canonical_domain=((-math.inf, math.inf),),
        expectation_domain=((-math.inf, math.inf),),
        data_domain=((-math.inf, math.inf),),
        log_partition=lambda eta: 0.5 * sigma2 * _as_complex(eta) ** 2 + half_log,
        sufficient_stat=lambda x: np.asarray(x, dtype=float),
        log_base_measure=lambda x: -np.asarray(x, dtype=float) ** 2 / (2.0 * sigma2),
        eta_of_mu=lambda mu: np.asarray(mu, dtype=float) / sigma2,
        mu_of_eta=lambda eta: sigma2 * np.asarray(eta, dtype=float),
        char_decay_exponent=math.inf,
        sample=lambda mu, count, rng: rng.normal(mu, sd, size=count),
        quantile=lambda mu, q: mu + sd * _STD_NORMAL.inv_cdf(q),
        label="Normal dist. with known variance",
        table_row={
            "statistic": "x",
            "canonical": "eta = mu / sigma2",
            "partition": "sigma2^(1/2) exp(sigma2 eta^2 / 2)",
            "complexity": "int dmu w(mu) / sqrt(2 pi sigma2 / n)",
        },
    )


def _normal_known_mean(mean):
    def log_partition(eta):
        return 0.5 * _LOG_PI - 0.5 * np.log(-_as_complex(eta))

    return ExpFamilyModel(
        model_id="normal-known-mean",
        fixed_params={"mean": mean},
        param_dim=1,
        data_dim=1,
        canonical_domain=((-math.inf, 0.0),),
        expectation_domain=((0.0, math.inf),),
        data_domain=((-math.inf, math.inf),),
        log_partition=log_partition,
        sufficient_stat=lambda x: (np.asarray(x, dtype=float) - mean) ** 2,
        log_base_measure=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        eta_of_mu=lambda mu: -0.5 / np.asarray(mu, dtype=float),
        mu_of_eta=lambda eta: -0.5 / np.asarray(eta, dtype=float),
        char_decay_exponent=0.5,
        sample=lambda mu, count, rng: rng.normal(mean, math.sqrt(mu), size=count),
        quantile=lambda mu, q: mean + math.sqrt(mu) * _STD_NORMAL.inv_cdf(q),
        label="Normal dist. with known mean",
        table_row={
            "statistic": "(x - mean)^2",
            "canonical": "eta = -1 / (2 sigma2)",
            "partition": "1 / sqrt(-eta)",
            "complexity": "(n/2)^(n/2) e^(-n/2) / Gamma(n/2) int dsigma2 w / sigma2",
        },
    )


def _laplace_known_mean(mean):
    def quantile(mu, q):
        if q < 0.5:
            return mean + mu * math.log(2.0 * q)
        return mean - mu * math.log(2.0 * (1.0 - q))

    return ExpFamilyModel(
        model_id="laplace-known-mean",
        fixed_params={"mean": mean},
        param_dim=1,
        data_dim=1,
        canonical_domain=((-math.inf, 0.0),),
        expectation_domain=((0.0, math.inf),),
        data_domain=((-math.inf, math.inf),),
        log_partition=lambda eta: _LOG_2 - np.log(-_as_complex(eta)),
        sufficient_stat=lambda x: np.abs(np.asarray(x, dtype=float) - mean),
        log_base_measure=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        eta_of_mu=lambda mu: -1.0 / np.asarray(mu, dtype=float),
        mu_of_eta=lambda eta: -1.0 / np.asarray(eta, dtype=float),
        char_decay_exponent=1.0,
        sample=lambda mu, count, rng: rng.laplace(mean, mu, size=count),
        quantile=quantile,
        label="Laplace dist. with known mean",
        table_row={
            "statistic": "|x - mean|",
            "canonical": "eta = -1 / b",
            "partition": "2 / (-eta)",
            "complexity": "n^n e^-n / Gamma(n) int db w(b) / b",
        },
    )


def _gamma_known_shape(kappa):
    lg_kappa = math.lgamma(kappa)

    return ExpFamilyModel(
        model_id="gamma-known-shape",
        fixed_params={"kappa": kappa},
        param_dim=1,
        data_dim=1,
        canonical_domain=((-math.inf, 0.0),),
        expectation_domain=((0.0, math.inf),),
        data_domain=((0.0, math.inf),),
        log_partition=lambda eta: lg_kappa - kappa * np.log(-_as_complex(eta)),
        sufficient_stat=lambda x: np.asarray(x, dtype=float),
        log_base_measure=lambda x: (kappa - 1.0) * np.log(np.asarray(x, dtype=float)),
        eta_of_mu=lambda mu: -kappa / np.asarray(mu, dtype=float),
        mu_of_eta=lambda eta: -kappa / np.asarray(eta, dtype=float),
        char_decay_exponent=kappa,
        sample=lambda mu, count, rng: rng.gamma(kappa, mu / kappa, size=count),
        quantile=lambda mu, q: float(sp_special.gammaincinv(kappa, q)) * mu / kappa,
        label="Gamma dist. with known shape" + (" (exponential dist.)" if kappa == 1.0 else ""),
        table_row={
            "statistic": "x",
            "canonical": "eta = -kappa / mu",
            "partition": "1 / (-eta)^kappa",
            "complexity": "(kappa n)^(kappa n) e^(-kappa n) / Gamma(kappa n) int dmu w / mu",
        },
    )


def _weibull_known_shape(shape):
    log_shape = math.log(shape)

    def log_base_measure(x):
        return log_shape + (shape - 1.0) * np.log(np.asarray(x, dtype=float))

    return ExpFamilyModel(
        model_id="weibull-known-shape",
        fixed_params={"shape": shape},
        param_dim=1,
        data_dim=1,
        canonical_domain=((-math.inf, 0.0),),
        expectation_domain=((0.0, math.inf),),
        data_domain=((0.0, math.inf),),
        log_partition=lambda eta: -np.log(-_as_complex(eta)),
        sufficient_stat=lambda x: np.asarray(x, dtype=float) ** shape,
        log_base_measure=log_base_measure,
        eta_of_mu=lambda mu: -1.0 / np.asarray(mu, dtype=float),
        mu_of_eta=lambda eta: -1.0 / np.asarray(eta, dtype=float),
        char_decay_exponent=1.0,
        sample=lambda mu, count, rng: (mu * rng.standard_exponential(size=count)) ** (1.0 / shape),
        quantile=lambda mu, q: (-mu * math.log1p(-q)) ** (1.0 / shape),
        label="Weibull dist. with known shape",
        table_row={
            "statistic": "x^k",
            "canonical": "eta = -1 / lambda",
            "partition": "1 / (-eta)",
            "complexity": "n^n e^-n / Gamma(n) int dlambda w / lambda",
        },
    )


def _gamma_known_scale(beta):
    log_beta = math.log(beta)

    def log_partition(eta):
        eta = _as_complex(eta)
        return log_gamma_array(eta + 1.0) + (eta + 1.0) * log_beta

    def eta_of_mu(mu):
        return inverse_digamma_array(np.asarray(mu, dtype=float) - log_beta) - 1.0

    def mu_of_eta(eta):
        return digamma_array(np.asarray(eta, dtype=float) + 1.0) + log_beta

    def sample(mu, count, rng):
        shape = float(eta_of_mu(np.array([mu]))[0]) + 1.0
        return rng.gamma(shape, beta, size=count)

    def quantile(mu, q):
        shape = float(eta_of_mu(np.array([mu]))[0]) + 1.0
        return beta * float(sp_special.gammaincinv(shape, q))

    return ExpFamilyModel(
        model_id="gamma-known-scale",
        fixed_params={"beta": beta},
        param_dim=1,
        data_dim=1,
        canonical_domain=((-1.0, math.inf),),
        expectation_domain=((-math.inf, math.inf),),
        data_domain=((0.0, math.inf),),
        log_partition=log_partition,
        sufficient_stat=lambda x: np.log(np.asarray(x, dtype=float)),
        log_base_measure=lambda x: -np.asarray(x, dtype=float) / beta,
        eta_of_mu=eta_of_mu,
        mu_of_eta=mu_of_eta,
        char_decay_exponent=math.inf,
        sample=sample,
        quantile=quantile,
        label="Gamma dist. with known scale" + (" (chi-squared type)" if beta == 2.0 else ""),
        table_row={
            "statistic": "log x",
            "canonical": "eta = invpsi(nu - log beta) - 1",
            "partition": "Gamma(eta + 1) beta^(eta + 1)",
            "complexity": "see the chi-squared-type inversion formula",
        },
    )


@dataclass(frozen=True)
class _RegistryEntry:
    builder: Callable
    params: tuple  # (name, default, must_be_positive)


REGISTRY = {
    "normal-known-variance": _RegistryEntry(_normal_known_variance, (("sigma2", 1.0, True),)),
    "normal-known-mean": _RegistryEntry(_normal_known_mean, (("mean", 0.0, False),)),
    "laplace-known-mean": _RegistryEntry(_laplace_known_mean, (("mean", 0.0, False),)),
    "gamma-known-shape": _RegistryEntry(_gamma_known_shape, (("kappa", 1.0, True),)),
    "weibull-known-shape": _RegistryEntry(_weibull_known_shape, (("shape", 1.0, True),)),
    "gamma-known-scale": _RegistryEntry(_gamma_known_scale, (("beta", 1.0, True),)),
}

MODEL_IDS = tuple(REGISTRY)


def registry_get(model_id, **fixed_params):
    """Build the registered model ``model_id`` with its fixed parameters.

    Missing parameters take their defaults (``sigma2=1``, ``mean=0``,
    ``kappa=1``, ``shape=1``, ``beta=1``).

    Raises
    ------
    ConfigError
        Unknown id, unknown parameter name, or a constraint violation.
    """
    try:
        entry = REGISTRY[model_id]
    except KeyError:
        raise ConfigError(f"unknown model {model_id!r}; valid ids: {', '.join(MODEL_IDS)}") from None
    known = {name for name, _, _ in entry.params}
    extra = set(fixed_params) - known
    if extra:
        raise ConfigError(f"{model_id} takes parameters {sorted(known)}, got unexpected {sorted(extra)}")
    args = []
    for name, default, positive in entry.params:
        value = float(fixed_params.get(name, default))
        if not math.isfinite(value) or (positive and not value > 0):
            raise ConfigError(f"{model_id}: parameter {name} must be {'> 0' if positive else 'finite'}, got {value}")
        args.append(value)
    return entry.builder(*args)


@dataclass(frozen=True)
class ModelSpec:
    """A registry model id, its fixed parameters and a luckiness weight."""

    model_id: str
    fixed_params: dict = field(default_factory=dict)
    luckiness: Luckiness = field(default_factory=Luckiness.zero)

    def __post_init__(self):
        model = self.model()
        if self.luckiness.kind == "indicator":
            self.luckiness.check_against(model)

    def model(self):
        return registry_get(self.model_id, **self.fixed_params)

    def to_dict(self):
        lk = self.luckiness
        return {
            "model": self.model_id,
            "params": dict(self.fixed_params),
            "window": [list(b) for b in lk.box] if lk.kind == "indicator" else None,
        }


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def log_density(model, x, mu):
    """``log p(x; mu) = log h(x) + eta(mu) T(x) - log Z(eta(mu))``.

    ``x`` may be a scalar or an array of data; ``mu`` is the expectation
    parameter (scalar for one-parameter models).
    """
    mu_arr = np.asarray(mu, dtype=float)
    if not np.all(model.in_expectation_domain(mu_arr)):
        model.check_mu(mu_arr)
    x_arr = model.check_data(np.atleast_1d(np.asarray(x, dtype=float)))
    eta = model.eta_of_mu(mu_arr)
    t = model.sufficient_stat(x_arr)
    if model.param_dim == 1:
        val = model.log_base_measure(x_arr) + eta * t - model.log_partition(eta).real
    else:
        val = model.log_base_measure(x_arr) + t @ eta - model.log_partition(eta).real
    if np.ndim(x) == 0:
        return float(val[0])
    return val


@dataclass(frozen=True)
class MLEResult:
    """Expectation-parameter MLE; ``boundary`` flags mu outside the open domain."""

    mu: np.ndarray
    boundary: bool

    def __float__(self):
        return float(np.asarray(self.mu).reshape(-1)[0])


def mle(model, data):
    """MLE of the expectation parameter: the sample mean of T(x)."""
    data = np.asarray(data, dtype=float)
    if data.shape[0] < 1:
        raise DataError("mle needs at least one record")
    model.check_data(data)
    t = model.sufficient_stat(data)
    mu = np.mean(t, axis=0)
    if model.param_dim == 1:
        mu = np.asarray(float(mu))
    boundary = not bool(np.all(model.in_expectation_domain(mu)))
    return MLEResult(mu, boundary)


def _grad_log_partition(model, eta):
    # complex-step derivative: Im log Z(eta + i h e_j) / h, no cancellation
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    d = eta.size
    h = 1e-30
    grad = np.empty(d)
    for j in range(d):
        e = eta.astype(complex)
        e[j] += 1j * h
        grad[j] = float(np.imag(model.log_partition(e if d > 1 else e[0]))) / h
    return grad


def _covariance_of_t(model, eta):
    # Cov(T) is the Hessian of log Z: central differences of the
    # complex-step gradient, Richardson-extrapolated over steps h and h/2
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    d = eta.size
    cov = np.empty((d, d))
    for j in range(d):
        lo, hi = model.canonical_domain[j]
        room = min(eta[j] - lo, hi - eta[j])
        h = 1e-3 * min(1.0 + abs(eta[j]), room)

        def slope(step):
            e = np.zeros(d)
            e[j] = step
            return (_grad_log_partition(model, eta + e) - _grad_log_partition(model, eta - e)) / (2.0 * step)

        cov[:, j] = (4.0 * slope(0.5 * h) - slope(h)) / 3.0
    return 0.5 * (cov + cov.T)


def fisher_info(model, mu):
    """Fisher information in expectation coordinates, ``Cov(T)^-1``.

    The covariance is the Hessian of ``log Z`` at ``eta(mu)``: a
    complex-step gradient differenced centrally with Richardson
    extrapolation, which keeps rounding error near 1e-13.

    Raises
    ------
    NumericalError
        If the finite-difference covariance is not positive definite.
    """
    mu = model.check_mu(mu)
    eta = model.eta_of_mu(mu)
    cov = _covariance_of_t(model, eta)
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise NumericalError(
            f"{model.model_id}: covariance of T at mu={mu} is not positive definite "
            "(finite-difference step too large or mu near the boundary)"
        ) from None
    return np.linalg.inv(cov)
