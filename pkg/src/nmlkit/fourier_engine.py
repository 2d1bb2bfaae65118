"""Luckiness parametric complexity by Fourier inversion.

For an exponential family the LPC is

    int dmu w(mu) g_n(mu; mu)

where ``g_n(.; mu)`` is the density of a sum of ``n`` i.i.d. variables whose
characteristic function is ``Z(eta(mu) + i w / n) / Z(eta(mu))``; the sum
has the law of the expectation-parameter MLE under ``mu``. This module
evaluates that density on the diagonal by numerical inversion, integrates it
against the luckiness weight, and also offers a sampling-based route that
only needs the MLE's empirical characteristic function.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ConfigError, IntegrabilityError, NumericalError
from .models import Luckiness
from .quadrature import (
    DEFAULT_CONFIG,
    IntegralResult,
    fourier_inverse,
    integrate_1d,
    integrate_nd,
    spawn_generators,
)
from .specialfn import inverse_digamma, log_gamma_array

METHODS = ("fourier", "closed_form", "asymptotic", "oracle_quad", "oracle_mc", "theorem1_mc")


@dataclass
class PCResult:
    """A (luckiness) parametric complexity in natural-log domain.

    ``log_value`` is ``-inf`` when the weight vanishes identically; that case
    is also flagged by ``diagnostics["divergent"]``.
    """

    log_value: float
    method: str
    error_estimate: float
    n: int
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown PC method {self.method!r}")
        if self.error_estimate < 0 or math.isnan(self.error_estimate):
            raise NumericalError(f"invalid error estimate {self.error_estimate!r}")

    @property
    def value(self):
        return math.exp(self.log_value)

    @property
    def divergent(self):
        return bool(self.diagnostics.get("divergent", False))

    @classmethod
    def zero_weight(cls, method, n):
        return cls(-math.inf, method, 0.0, n, {"divergent": True, "reason": "zero luckiness weight"})


def _log_result(value, abs_error, method, n, diagnostics):
    if not value > 0:
        raise NumericalError(f"{method}: non-positive LPC estimate {value!r}")
    return PCResult(math.log(value), method, abs_error / value, n, diagnostics)


# ---------------------------------------------------------------------------
# Characteristic function of the MLE sum
# ---------------------------------------------------------------------------

def char_ratio(model, mu, omega, n):
    """``(Z(eta(mu) + i omega / n) / Z(eta(mu)))^n`` evaluated in log domain.

    ``omega`` may be a scalar or an array (last axis = coordinate when
    ``param_dim > 1``). Returns a complex scalar or array.
    """
    mu = model.check_mu(mu)
    eta = np.asarray(model.eta_of_mu(mu), dtype=complex)
    omega_arr = np.asarray(omega, dtype=float)
    base = model.log_partition(eta)
    shifted = model.log_partition(eta + 1j * omega_arr / n)
    out = np.exp(n * (shifted - base))
    if np.ndim(omega) == 0 or (model.param_dim > 1 and omega_arr.ndim == 1):
        return complex(out)
    return out


def _decay(model, n):
    alpha = model.char_decay_exponent * n
    if not alpha > 1.0:
        raise IntegrabilityError(
            f"{model.model_id} at n={n}: characteristic function decays like |w|^-{alpha:g}, "
            "not integrable (decay exponent must exceed 1)"
        )
    return alpha


def g_density(model, mu, t, n, cfg=None):
    """Density at ``t`` of the MLE sum under ``mu`` (one-parameter models)."""
    cfg = cfg or DEFAULT_CONFIG
    alpha = _decay(model, n)
    mu_f = float(model.check_mu(mu))
    return fourier_inverse(lambda w: char_ratio(model, mu_f, w, n), float(t), alpha, cfg)


def g_diag(model, mu, n, cfg=None):
    """Density of the MLE sum under ``mu``, evaluated at ``mu``.

    One-parameter models use :func:`fourier_inverse`; models with
    ``param_dim`` 2 or 3 integrate the inversion integral on a tensor grid.

    Raises
    ------
    IntegrabilityError
        When ``char_decay_exponent * n <= 1``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if model.param_dim == 1:
        return g_density(model, mu, mu, n, cfg)
    _decay(model, n)
    return _g_diag_grid(model, model.check_mu(mu), n, cfg)


def _g_diag_grid(model, mu, n, cfg):
    d = model.param_dim
    if d > 3:
        raise ConfigError("frequency inversion supports at most 3 parameters")
    half_widths = []
    for j in range(d):
        w = 1.0
        e = np.zeros(d)
        e[j] = 1.0
        while abs(char_ratio(model, mu, w * e, n)) > 1e-17 and w < 1e8:
            w *= 1.5
        half_widths.append(w)
    mu_vec = np.asarray(mu, dtype=float)

    def f(points):
        vals = char_ratio(model, mu_vec, points, n)
        return np.real(np.exp(-1j * points @ mu_vec) * vals)

    box = [(-hw, hw) for hw in half_widths]
    res = integrate_nd(f, box, cfg)
    scale = (2.0 * math.pi) ** d
    return IntegralResult(res.value / scale, res.error_estimate / scale, res.evaluations,
                          0.0, {"half_widths": half_widths})


# ---------------------------------------------------------------------------
# Outer parameter integral
# ---------------------------------------------------------------------------

def _outer_integral(point_value, w, domain, cfg):
    """Integrate ``w(mu) * point_value(mu)`` over the support of ``w``.

    Half-line domains ``(0, inf)`` are integrated in ``u = log mu``.
    Returns ``(IntegralResult, inner_error_bound)``.
    """
    (lo, hi), = w.box if w.box else ((domain[0][0], domain[0][1]),)
    dlo, dhi = domain[0]
    log_coords = dlo == 0.0 and math.isinf(dhi)
    worst = [0.0]
    calls = [0]

    def evaluate(mus):
        out = np.empty(mus.size)
        for i, m in enumerate(mus):
            r = point_value(float(m))
            out[i] = r.value
            worst[0] = max(worst[0], r.total_error)
            calls[0] += r.evaluations
        return out

    if log_coords:
        a = math.log(lo) if lo > 0 else -math.inf
        b = math.log(hi) if math.isfinite(hi) else math.inf

        def integrand(u):
            mus = np.exp(u)
            return w(mus) * evaluate(mus) * mus

        res = integrate_1d(integrand, (a, b), cfg)
        jac_len = _weight_mass(w, log_coords=True, lo=a, hi=b, cfg=cfg)
    else:
        def integrand(mus):
            return w(mus) * evaluate(mus)

        res = integrate_1d(integrand, (lo, hi), cfg)
        jac_len = _weight_mass(w, log_coords=False, lo=lo, hi=hi, cfg=cfg)
    res.diagnostics.update({"log_coordinates": log_coords, "inner_evaluations": calls[0]})
    return res, worst[0] * jac_len


def _weight_mass(w, log_coords, lo, hi, cfg):
    # integral of w (times the log-coordinate Jacobian) over its support;
    # multiplies the worst pointwise inner error into a global bound
    if w.kind == "indicator":
        if log_coords:
            return math.exp(hi) - math.exp(lo)
        return hi - lo
    if log_coords:
        res = integrate_1d(lambda u: w(np.exp(u)) * np.exp(u), (lo, hi), cfg)
    else:
        res = integrate_1d(lambda m: w(m), (lo, hi), cfg)
    return abs(res.value)


def _check_weight(model, w):
    if not isinstance(w, Luckiness):
        raise ConfigError("luckiness must be a Luckiness instance")
    if w.kind == "indicator":
        w.check_against(model)
    if model.param_dim != 1 and not w.is_zero:
        raise ConfigError("parameter integrals are implemented for one-parameter models")


def lpc_fourier(model, w, n, cfg=None):
    """Exact LPC of an exponential-family model by Fourier inversion.

    Parameters
    ----------
    model : ExpFamilyModel
    w : Luckiness
        Indicator windows must lie strictly inside the expectation domain.
    n : int
        Sample size.

    Returns
    -------
    PCResult
        ``method="fourier"``; ``error_estimate`` is the relative error
        propagated from the outer integral and the worst inner inversion.
    """
    cfg = cfg or DEFAULT_CONFIG
    n = int(n)
    if n < 1:
        raise ConfigError("n must be >= 1")
    _check_weight(model, w)
    if w.is_zero:
        return PCResult.zero_weight("fourier", n)
    _decay(model, n)
    inner_cfg = cfg.replace(rel_tol=min(cfg.rel_tol, 1e-10))
    outer_cfg = cfg.replace(abs_tol=cfg.abs_tol * 10)
    res, inner_bound = _outer_integral(lambda m: g_diag(model, m, n, inner_cfg), w,
                                       model.expectation_domain, outer_cfg)
    diagnostics = {
        "outer_error": res.error_estimate,
        "inner_error_bound": inner_bound,
        "evaluations": res.evaluations,
        **res.diagnostics,
    }
    return _log_result(res.value, res.error_estimate + inner_bound, "fourier", n, diagnostics)


# ---------------------------------------------------------------------------
# Gamma with known scale: log-gamma characteristic functions
# ---------------------------------------------------------------------------

def log_gamma_sum_density(s, n, cfg=None):
    """Density at ``s`` of a sum of ``n`` variables ``-(1/n) log Y``, ``Y ~ Gamma(p, 1)``.

    The shape is tied to the evaluation point through ``p = invpsi(-s)``, so
    the returned value is the diagonal density needed for the LPC of the
    gamma family with known scale.
    """
    cfg = cfg or DEFAULT_CONFIG
    p = inverse_digamma(-s)
    base = complex(log_gamma_array(np.array([p + 0j]))[0])

    def phi(w):
        w = np.asarray(w, dtype=float)
        return np.exp(n * (log_gamma_array(p - 1j * w / n) - base))

    res = fourier_inverse(phi, s, math.inf, cfg)
    res.diagnostics["shape"] = p
    return res


def lpc_gamma_known_scale(beta, w, n, cfg=None):
    """LPC of the gamma family with known scale ``beta`` (chi-squared type).

    ``w`` is a luckiness weight on ``nu = E[log x]``. The outer integral runs
    over ``s = log(beta) - nu`` and the inner density is inverted from the
    log-gamma characteristic function ``(Gamma(p - i w/n) / Gamma(p))^n``
    with ``p = invpsi(-s)``; no model object is involved, which makes this a
    separate code path from :func:`lpc_fourier` on the same family.
    """
    cfg = cfg or DEFAULT_CONFIG
    n = int(n)
    if not beta > 0:
        raise ConfigError("beta must be > 0")
    if n < 1:
        raise ConfigError("n must be >= 1")
    if w.is_zero:
        return PCResult.zero_weight("fourier", n)
    if not w.box or any(math.isinf(v) for v in w.box[0]):
        raise ConfigError("lpc_gamma_known_scale needs a weight supported on a finite interval")
    (nu_lo, nu_hi), = w.box
    log_beta = math.log(beta)
    inner_cfg = cfg.replace(rel_tol=min(cfg.rel_tol, 1e-10))
    worst = [0.0]

    def integrand(s):
        out = np.empty(s.size)
        for i, si in enumerate(s):
            r = log_gamma_sum_density(float(si), n, inner_cfg)
            out[i] = r.value
            worst[0] = max(worst[0], r.total_error)
        return w(log_beta - s) * out

    res = integrate_1d(integrand, (log_beta - nu_hi, log_beta - nu_lo), cfg.replace(abs_tol=cfg.abs_tol * 10))
    inner_bound = worst[0] * (nu_hi - nu_lo)
    diagnostics = {"outer_error": res.error_estimate, "inner_error_bound": inner_bound,
                   "path": "log-gamma characteristic function"}
    return _log_result(res.value, res.error_estimate + inner_bound, "fourier", n, diagnostics)


# ---------------------------------------------------------------------------
# Monte Carlo route through the MLE characteristic function
# ---------------------------------------------------------------------------

_MLE_CHUNK = 1 << 15


@dataclass
class MCCharResult:
    """Monte-Carlo characteristic-function value with per-component standard errors."""

    value: complex
    stderr_real: float
    stderr_imag: float
    samples: int


def _mle_samples(model, mu, n, count, rng):
    out = np.empty(count)
    done = 0
    per = max(1, _MLE_CHUNK // n)
    while done < count:
        size = min(per, count - done)
        x = model.sample(mu, size * n, rng).reshape(size, n)
        out[done:done + size] = np.mean(model.sufficient_stat(x), axis=1)
        done += size
    return out


def mle_char_fn_mc(model, mu, omega, n, cfg=None):
    """Estimate ``E[exp(i omega (mu_hat - mu))]`` for ``n`` draws at ``mu``.

    ``cfg.mc_samples`` independent samples of size ``n`` are drawn with a
    generator derived from ``cfg.seed``.
    """
    cfg = cfg or DEFAULT_CONFIG
    mu = float(model.check_mu(mu))
    rng, = spawn_generators(cfg.seed, 1)
    dev = _mle_samples(model, mu, int(n), cfg.mc_samples, rng) - mu
    omega = float(omega)
    if omega == 0.0:
        return MCCharResult(1.0 + 0.0j, 0.0, 0.0, cfg.mc_samples)
    re = np.cos(omega * dev)
    im = np.sin(omega * dev)
    m = cfg.mc_samples
    se_re = float(np.std(re, ddof=1) / math.sqrt(m)) if m > 1 else math.inf
    se_im = float(np.std(im, ddof=1) / math.sqrt(m)) if m > 1 else math.inf
    return MCCharResult(complex(np.mean(re), np.mean(im)), se_re, se_im, m)


def _gauss_legendre(a, b, k):
    x, wts = np.polynomial.legendre.leggauss(k)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * wts


def _sinc_density(dev, omega_max):
    # (1/2pi) int_{-W}^{W} mean(exp(i w dev)) dw = mean(sin(W dev) / (pi dev))
    with np.errstate(invalid="ignore", divide="ignore"):
        terms = np.where(dev == 0.0, omega_max / math.pi, np.sin(omega_max * dev) / (math.pi * dev))
    return terms


def _noise_cutoff(dev, rng_sub=4096):
    """Frequency where the empirical characteristic function sinks into noise."""
    sd = float(np.std(dev))
    if not sd > 0:
        raise NumericalError("degenerate MLE sample (zero spread)")
    floor = 3.0 / math.sqrt(dev.size)
    grid = (np.arange(1, 129) / 16.0) / sd
    mags = np.array([abs(np.mean(np.exp(1j * w * dev))) for w in grid])
    below = np.flatnonzero(mags < floor)
    return float(grid[below[0]]) if below.size else float(grid[-1])


def lpc_theorem1_mc(model, w, n, cfg=None, nodes=16):
    """LPC from sampled MLE characteristic functions.

    For each of ``nodes`` Gauss-Legendre points in the luckiness window
    (log coordinates on half-line domains) the MLE is sampled
    ``cfg.mc_samples // nodes`` times, and the density at the true parameter
    is obtained by inverting the empirical characteristic function up to
    the frequency where it reaches the sampling noise floor. The error
    combines sampling error with a truncation-bias proxy (the change of the
    estimate between 0.8 and 1.0 times the cut-off).
    """
    cfg = cfg or DEFAULT_CONFIG
    n = int(n)
    _check_weight(model, w)
    if w.is_zero:
        return PCResult.zero_weight("theorem1_mc", n)
    _decay(model, n)
    (lo, hi), = w.box
    if math.isinf(lo) or math.isinf(hi):
        raise ConfigError("lpc_theorem1_mc needs a weight with finite support")
    dlo, dhi = model.expectation_domain[0]
    log_coords = dlo == 0.0 and math.isinf(dhi)
    if log_coords:
        u, wts = _gauss_legendre(math.log(lo), math.log(hi), nodes)
        mus = np.exp(u)
        wts = wts * mus
    else:
        mus, wts = _gauss_legendre(lo, hi, nodes)
    per_node = max(2, cfg.mc_samples // nodes)
    gens = spawn_generators(cfg.seed, nodes)
    total = 0.0
    var = 0.0
    bias = 0.0
    cutoffs = []
    for mu, wt, rng in zip(mus, wts, gens):
        dev = _mle_samples(model, float(mu), n, per_node, rng) - mu
        cut = _noise_cutoff(dev)
        cutoffs.append(cut)
        terms = _sinc_density(dev, cut)
        est = float(np.mean(terms))
        se = float(np.std(terms, ddof=1) / math.sqrt(per_node))
        est_short = float(np.mean(_sinc_density(dev, 0.8 * cut)))
        weight = float(w(np.array([mu]))[0]) * wt
        total += weight * est
        var += (weight * se) ** 2
        bias += abs(weight) * abs(est - est_short)
    err = math.sqrt(var) + bias
    diagnostics = {"nodes": nodes, "samples_per_node": per_node, "stderr": math.sqrt(var),
                   "bias_proxy": bias, "cutoffs": cutoffs}
    if err > 0.5 * abs(total):
        diagnostics["large_stderr"] = True
    return _log_result(total, err, "theorem1_mc", n, diagnostics)
