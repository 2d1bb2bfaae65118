"""Brute-force LPC straight from its definition.

The LPC is the data-space integral

    int p(x^n; mu_hat(x^n)) w(mu_hat(x^n)) dx^n

of the weighted maximized likelihood. This module evaluates it without any
characteristic function. Small ``n`` uses cubature over a truncated data
box. Larger ``n`` uses importance sampling from the model at fixed
proposal parameters. Both serve as references for the formula-based paths.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, UnsupportedDimension
from .fourier_engine import PCResult
from .quadrature import DEFAULT_CONFIG, QuadConfig, integrate_1d, spawn_generators

_MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class OracleConfig:
    """Settings for the definition-level oracles.

    Parameters
    ----------
    method : {"quadrature", "importance_sampling"}
    reference_mu : sequence of float, optional
        Proposal parameters. ``None`` means the window's midpoint (log
        midpoint on half-line domains). Several values give an equal-weight
        mixture proposal.
    tail_mass : float
        Per-coordinate probability left outside the truncated data box, for
        every parameter in the window.
    quad : QuadConfig
    """

    method: str = "quadrature"
    reference_mu: tuple | None = None
    tail_mass: float = 1e-8
    quad: QuadConfig = field(default_factory=lambda: DEFAULT_CONFIG.replace(rel_tol=1e-7))

    def __post_init__(self):
        if self.method not in ("quadrature", "importance_sampling"):
            raise ConfigError(f"unknown oracle method {self.method!r}")
        if not 0 < self.tail_mass < 0.5:
            raise ConfigError("tail_mass must be in (0, 0.5)")
        if self.reference_mu is not None:
            ref = tuple(float(v) for v in np.atleast_1d(self.reference_mu))
            if not ref:
                raise ConfigError("reference_mu must not be empty")
            object.__setattr__(self, "reference_mu", ref)


def _log_max_likelihood_weighted(model, w, x):
    """``log p(x; mu_hat) + log w(mu_hat)`` per row of ``x`` (shape ``(m, n)``).

    Rows whose MLE is outside the domain or has zero weight give ``-inf``.
    """
    n = x.shape[1]
    t = model.sufficient_stat(x)
    mu_hat = t.mean(axis=1)
    out = np.full(x.shape[0], -np.inf)
    ok = model.in_expectation_domain(mu_hat)
    wt = np.zeros_like(mu_hat)
    wt[ok] = w(mu_hat[ok])
    ok &= wt > 0
    if np.any(ok):
        eta = model.eta_of_mu(mu_hat[ok])
        loglik = (np.sum(model.log_base_measure(x[ok]), axis=1) + eta * np.sum(t[ok], axis=1)
                  - n * np.real(model.log_partition(eta)))
        out[ok] = loglik + np.log(wt[ok])
    return out


def _log_likelihood(model, log_h, sum_t, n, mu):
    eta = float(model.eta_of_mu(mu))
    return log_h + eta * sum_t - n * float(np.real(model.log_partition(eta)))


def _window(model, w):
    if w.kind == "zero":
        return None
    if model.param_dim != 1 or model.data_dim != 1:
        raise UnsupportedDimension("oracles are implemented for scalar data and one parameter")
    w.check_against(model)
    (lo, hi), = w.box
    if math.isinf(lo) or math.isinf(hi):
        raise ConfigError("oracle needs a luckiness window with finite support")
    return lo, hi


def data_box(model, window, tail_mass, log_scale=False):
    """Per-coordinate data interval holding ``1 - tail_mass`` of every window model.

    Finite data-domain limits are used as-is, except a zero lower limit when
    ``log_scale`` is set. Other limits are replaced by the extreme quantile
    over the two window endpoints (all registry rows are stochastically
    monotone in ``mu``).
    """
    lo_dom, hi_dom = model.data_domain[0]
    lo, hi = window
    q_lo, q_hi = 0.5 * tail_mass, 1.0 - 0.5 * tail_mass
    keep_lo = math.isfinite(lo_dom) and not (log_scale and lo_dom == 0.0)
    a = lo_dom if keep_lo else min(model.quantile(lo, q_lo), model.quantile(hi, q_lo))
    b = hi_dom if math.isfinite(hi_dom) else max(model.quantile(lo, q_hi), model.quantile(hi, q_hi))
    return float(a), float(b)


class _Preimage:
    """Breakpoints where the MLE of a partial data sequence crosses the window.

    The cubature integrand jumps when ``mu_hat`` leaves the window; placing
    those points as interval breaks keeps every panel smooth. With ``k`` of
    ``n`` coordinates fixed (sum ``S`` of their statistics), the next
    coordinate ``x`` gives a jump or kink wherever ``T(x) = c`` for
    ``c = n * edge - S - r * T_ext``, where ``r`` coordinates remain free and
    ``T_ext`` is an extreme of ``T`` over the box.
    """

    def __init__(self, stat, box, window, n, grid=4097):
        self.stat = stat
        self.n = n
        self.window = window
        x = np.linspace(box[0], box[1], grid)
        with np.errstate(all="ignore"):
            t = stat(x)
        keep = np.isfinite(t)
        x, t = x[keep], t[keep]
        self.t_ext = (float(np.min(t)), float(np.max(t)))
        interior = [x[int(np.argmin(t))], x[int(np.argmax(t))]]
        self.stationary = [v for v in interior if box[0] < v < box[1]]
        # split the grid into monotone runs; each is searched by bisection on the table
        cuts = sorted({0, len(x) - 1, *(int(np.argmin(t)), int(np.argmax(t)))})
        self.pieces = []
        for a, b in zip(cuts, cuts[1:]):
            xs, ts = x[a:b + 1], t[a:b + 1]
            if ts[-1] < ts[0]:
                xs, ts = xs[::-1], ts[::-1]
            self.pieces.append((xs, ts))

    def _solve(self, c):
        roots = []
        for xs, ts in self.pieces:
            if not ts[0] < c < ts[-1]:
                continue
            i = int(np.searchsorted(ts, c))
            a, b = float(xs[i - 1]), float(xs[i])
            stat = self.stat
            roots.append(brentq(lambda v: float(stat(v)) - c, a, b, xtol=1e-15 * max(1.0, abs(a)), rtol=1e-15))
        return np.array(roots)

    def points(self, partial_sum, remaining):
        levels = []
        for edge in self.window:
            for t_ext in self.t_ext:
                levels.append(self.n * edge - partial_sum - remaining * t_ext)
        pts = [self._solve(c) for c in levels]
        pts.append(np.asarray(self.stationary))
        return np.unique(np.concatenate(pts))


def _log_coordinates(model):
    # a statistic unbounded at x = 0 (e.g. log x) is smooth only in log x
    lo, hi = model.data_domain[0]
    if lo != 0.0 or not math.isinf(hi):
        return False
    with np.errstate(all="ignore"):
        t0 = model.sufficient_stat(np.array([0.0]))
    return not np.all(np.isfinite(t0))


def lpc_oracle_quadrature(model, w, n, ocfg=None):
    """LPC by cubature over the truncated data box, ``n * data_dim <= 3``.

    Iterated adaptive Gauss-Kronrod with breakpoints at the preimage of the
    window edges (see :class:`_Preimage`). Half-line data whose statistic
    is unbounded at zero are integrated in ``log x``.
    The truncated tail bound ``n * tail_mass * value`` is added to the
    error estimate.
    """
    ocfg = ocfg or OracleConfig()
    n = int(n)
    if n * model.data_dim > 3:
        raise UnsupportedDimension(f"data-space cubature supports n * data_dim <= 3, got {n * model.data_dim}")
    if n < 1:
        raise ConfigError("n must be >= 1")
    window = _window(model, w)
    if window is None:
        return PCResult(-math.inf, "oracle_quad", 0.0, n, {"divergent": True, "value": 0.0})
    log_scale = _log_coordinates(model)
    box = data_box(model, window, ocfg.tail_mass, log_scale)
    if log_scale:
        ubox = (math.log(box[0]), math.log(box[1]))
        to_x = np.exp
        log_jac = lambda u: u  # noqa: E731
    else:
        ubox = box
        to_x = lambda u: u  # noqa: E731
        log_jac = np.zeros_like
    stat = lambda u: model.sufficient_stat(to_x(u))  # noqa: E731
    pre = _Preimage(stat, ubox, window, n)
    cfg = ocfg.quad
    inner_cfg = cfg.replace(rel_tol=cfg.rel_tol * 0.1, abs_tol=cfg.abs_tol * 0.1)
    counter = [0]

    def level(prefix, depth):
        s = float(np.sum(stat(np.asarray(prefix)))) if prefix else 0.0
        pts = pre.points(s, n - depth - 1)
        if depth == n - 1:
            def g(u):
                rows = np.empty((u.size, n))
                rows[:, :depth] = prefix
                rows[:, depth] = u
                counter[0] += u.size
                log_f = _log_max_likelihood_weighted(model, w, to_x(rows))
                return np.exp(log_f + np.sum(log_jac(rows), axis=1))
        else:
            def g(u):
                return np.array([level(prefix + [float(ui)], depth + 1).value for ui in u])
        return integrate_1d(g, ubox, cfg if depth == 0 else inner_cfg, points=pts)

    res = level([], 0)
    tail = n * ocfg.tail_mass * abs(res.value)
    diagnostics = {"data_box": box, "tail_bound": tail, "evaluations": counter[0], "value": res.value}
    if not res.value > 0:
        return PCResult(-math.inf, "oracle_quad", 0.0, n, {**diagnostics, "divergent": True})
    return PCResult(math.log(res.value), "oracle_quad", (res.error_estimate + tail) / res.value, n, diagnostics)


def _proposals(model, window, ocfg):
    if ocfg.reference_mu is not None:
        refs = ocfg.reference_mu
    else:
        lo, hi = window
        dlo, dhi = model.expectation_domain[0]
        refs = (math.sqrt(lo * hi) if dlo == 0.0 and math.isinf(dhi) else 0.5 * (lo + hi),)
    for r in refs:
        model.check_mu(r)
    return refs


def proposal_grid(model, w, count):
    """``count`` proposal parameters spread evenly over the window.

    Spacing is geometric on half-line domains. A mixture over this grid
    keeps importance weights bounded when the MLE's spread is much smaller
    than the window, which a single proposal cannot do at large ``n``.
    """
    lo, hi = _window(model, w)
    dlo, dhi = model.expectation_domain[0]
    if dlo == 0.0 and math.isinf(dhi):
        return tuple(np.exp(np.linspace(math.log(lo), math.log(hi), count)))
    return tuple(np.linspace(lo, hi, count))


def lpc_oracle_mc(model, w, n, ocfg=None):
    """LPC by importance sampling from the model at ``reference_mu``.

    Estimates ``E_q[p(x; mu_hat) w(mu_hat) / q(x)]`` where ``q`` is the
    (mixture of) model density at the proposal parameter(s). The standard
    error and the effective sample size ``(sum r)^2 / sum r^2`` are
    reported; an ESS under 1% of the samples sets ``diagnostics["degenerate"]``.
    """
    ocfg = ocfg or OracleConfig(method="importance_sampling")
    n = int(n)
    if n < 1:
        raise ConfigError("n must be >= 1")
    window = _window(model, w)
    if window is None:
        return PCResult(-math.inf, "oracle_mc", 0.0, n, {"divergent": True, "value": 0.0, "stderr": 0.0})
    refs = _proposals(model, window, ocfg)
    k = len(refs)
    total = ocfg.quad.mc_samples
    gens = spawn_generators(ocfg.quad.seed, -(-total // _MC_CHUNK))
    done = 0
    ratios = []
    for rng in gens:
        size = min(_MC_CHUNK, total - done)
        comp = np.arange(size) % k
        x = np.empty((size, n))
        for j, r in enumerate(refs):
            sel = comp == j
            x[sel] = model.sample(r, int(sel.sum()) * n, rng).reshape(-1, n)
        log_h = np.sum(model.log_base_measure(x), axis=1)
        sum_t = np.sum(model.sufficient_stat(x), axis=1)
        log_q = np.stack([_log_likelihood(model, log_h, sum_t, n, r) for r in refs])
        log_q = np.logaddexp.reduce(log_q, axis=0) - math.log(k)
        ratios.append(_log_max_likelihood_weighted(model, w, x) - log_q)
        done += size
    log_r = np.concatenate(ratios)
    shift = float(np.max(log_r)) if np.isfinite(np.max(log_r)) else 0.0
    r = np.exp(log_r - shift)
    s1 = float(np.sum(r))
    s2 = float(np.sum(r * r))
    mean = s1 / total
    var = max(s2 / total - mean * mean, 0.0) * total / (total - 1)
    stderr_scaled = math.sqrt(var / total)
    ess = s1 * s1 / s2 if s2 > 0 else 0.0
    value = mean * math.exp(shift)
    stderr = stderr_scaled * math.exp(shift)
    diagnostics = {"value": value, "stderr": stderr, "ess": ess, "samples": total,
                   "proposals": list(refs), "degenerate": ess < 0.01 * total}
    if not value > 0:
        return PCResult(-math.inf, "oracle_mc", math.inf if total else 0.0, n, {**diagnostics, "divergent": True})
    return PCResult(math.log(value), "oracle_mc", stderr / value, n, diagnostics)


def nml_normalization_check(model, w, n, ocfg=None, lpc_scale=1.0, log_lpc=None):
    """Total mass of the luckiness-NML density ``p(x; mu_hat) w(mu_hat) / LPC``.

    ``log_lpc`` defaults to the closed-form (or Fourier) value for the
    model; ``lpc_scale`` multiplies it, which lets callers check that the
    test detects a wrong normalizer.
    """
    from .closed_form import spec_lpc
    from .models import ModelSpec

    ocfg = ocfg or OracleConfig()
    if log_lpc is None:
        spec = ModelSpec(model.model_id, dict(model.fixed_params), w)
        log_lpc = spec_lpc(spec, n).log_value
    if ocfg.method == "quadrature" and n * model.data_dim <= 3:
        mass = lpc_oracle_quadrature(model, w, n, ocfg)
    else:
        mass = lpc_oracle_mc(model, w, n, ocfg)
    if w.is_zero:
        return 0.0
    return math.exp(mass.log_value - log_lpc) / lpc_scale
