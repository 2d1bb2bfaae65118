"""Registry models: parameter maps, densities, MLE and Fisher information."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nmlkit import Luckiness, ModelSpec, fisher_info, log_density, mle, registry_get
from nmlkit.errors import ConfigError, DataError, DomainError
from nmlkit.models import MODEL_IDS, _grad_log_partition

from conftest import mu_grid

ALL_MODELS = [registry_get(mid) for mid in MODEL_IDS] + [
    registry_get("normal-known-variance", sigma2=3.0),
    registry_get("gamma-known-shape", kappa=2.5),
    registry_get("weibull-known-shape", shape=1.7),
    registry_get("gamma-known-scale", beta=2.0),
    registry_get("laplace-known-mean", mean=-1.0),
]


def _ids(models):
    return [repr(m) for m in models]


def test_log_density_examples():
    assert log_density(registry_get("gamma-known-shape", kappa=1), 1.0, 1.0) == pytest.approx(-1.0, abs=1e-14)
    assert log_density(registry_get("normal-known-variance"), 0.0, 0.0) == pytest.approx(-0.5 * math.log(2 * math.pi), abs=1e-14)
    # Laplace mean 0, scale b = 2 has mu = E|x| = 2
    assert log_density(registry_get("laplace-known-mean"), 1.0, 2.0) == pytest.approx(math.log(0.25) - 0.5, abs=1e-14)


def test_log_density_domain_errors():
    with pytest.raises(DomainError, match="mu"):
        log_density(registry_get("gamma-known-shape"), 1.0, -1.0)
    with pytest.raises(DataError) as info:
        log_density(registry_get("gamma-known-shape"), np.array([1.0, -2.0]), 1.0)
    assert info.value.index == 1


def test_mle_examples():
    assert float(mle(registry_get("gamma-known-shape"), [1.0, 3.0])) == 2.0
    assert float(mle(registry_get("normal-known-mean"), [2.0, -2.0])) == 4.0
    assert float(mle(registry_get("gamma-known-scale"), [1.0, 1.0, 1.0])) == 0.0


def test_mle_boundary_flag():
    res = mle(registry_get("normal-known-mean"), [0.0, 0.0])
    assert res.boundary and float(res) == 0.0
    assert not mle(registry_get("normal-known-mean"), [1.0]).boundary


@pytest.mark.parametrize("model", ALL_MODELS, ids=_ids(ALL_MODELS))
def test_round_trip(model):
    lo, hi = model.expectation_domain[0]
    if lo == 0.0:
        mus = np.exp(np.linspace(-6, 6, 100))
    else:
        mus = np.linspace(-25, 25, 100)
    back = model.mu_of_eta(model.eta_of_mu(mus))
    assert np.all(np.abs(back - mus) <= 1e-10 * (1 + np.abs(mus)))


@pytest.mark.parametrize("model", ALL_MODELS, ids=_ids(ALL_MODELS))
def test_log_partition_real_on_real_axis(model):
    eta = model.eta_of_mu(mu_grid(model, 20))
    vals = model.log_partition(eta)
    assert np.max(np.abs(np.imag(vals))) < 1e-12


@pytest.mark.parametrize("model", ALL_MODELS, ids=_ids(ALL_MODELS))
def test_gradient_identity(model):
    for mu in mu_grid(model, 20):
        eta = float(model.eta_of_mu(mu))
        h = 1e-5 * (1 + abs(eta))
        if model.canonical_domain[0][1] == 0.0:
            h = min(h, 0.5 * abs(eta))
        fd = (model.log_partition(eta + h) - model.log_partition(eta - h)).real / (2 * h)
        assert fd == pytest.approx(mu, rel=1e-6, abs=1e-6)
        assert _grad_log_partition(model, eta)[0] == pytest.approx(mu, rel=1e-12, abs=1e-12)


ANALYTIC_FISHER = [
    ("normal-known-variance", {"sigma2": 2.0}, lambda mu: 1 / 2.0),
    ("normal-known-mean", {}, lambda mu: 1 / (2 * mu * mu)),
    ("laplace-known-mean", {}, lambda mu: 1 / (mu * mu)),
    ("gamma-known-shape", {"kappa": 3.0}, lambda mu: 3.0 / (mu * mu)),
    ("weibull-known-shape", {"shape": 2.0}, lambda mu: 1 / (mu * mu)),
]


@pytest.mark.parametrize("mid, params, ref", ANALYTIC_FISHER, ids=[a[0] for a in ANALYTIC_FISHER])
def test_fisher_info_analytic(mid, params, ref):
    model = registry_get(mid, **params)
    for mu in (0.3, 1.0, 2.0, 7.5):
        got = fisher_info(model, mu)[0, 0]
        assert got == pytest.approx(ref(mu), rel=1e-5)


def test_fisher_info_examples():
    assert fisher_info(registry_get("gamma-known-shape"), 2.0)[0, 0] == pytest.approx(0.25, rel=1e-10)
    assert fisher_info(registry_get("normal-known-variance"), -4.0)[0, 0] == pytest.approx(1.0, rel=1e-12)
    assert fisher_info(registry_get("normal-known-mean"), 1.0)[0, 0] == pytest.approx(0.5, rel=1e-10)


def test_fisher_info_gamma_known_scale_is_inverse_trigamma():
    from nmlkit.specialfn import inverse_digamma, trigamma

    model = registry_get("gamma-known-scale", beta=2.0)
    for nu in (-8.0, -1.0, 0.3, 4.0):
        shape = inverse_digamma(nu - math.log(2.0))
        assert fisher_info(model, nu)[0, 0] == pytest.approx(1 / trigamma(shape), rel=1e-8)


@pytest.mark.parametrize("model", ALL_MODELS, ids=_ids(ALL_MODELS))
def test_mle_consistency(model):
    rng = np.random.default_rng(11)
    n = 10_000
    for mu0 in mu_grid(model, 4)[1:3]:
        data = model.sample(mu0, n, rng)
        est = float(mle(model, data))
        se = 1 / math.sqrt(n * fisher_info(model, mu0)[0, 0])
        assert abs(est - mu0) <= 5 * se


def test_registry():
    assert "exponential" in registry_get("gamma-known-shape", kappa=1).label
    assert "chi-squared" in registry_get("gamma-known-scale", beta=2).label
    m = registry_get("normal-known-variance", sigma2=1)
    assert m.log_partition(0.7).real == pytest.approx(0.5 * 0.49 + 0.5 * math.log(2 * math.pi))
    assert len(MODEL_IDS) == 6
    with pytest.raises(ConfigError, match="valid ids"):
        registry_get("poisson")
    with pytest.raises(ConfigError):
        registry_get("gamma-known-shape", kappa=-1)
    with pytest.raises(ConfigError):
        registry_get("gamma-known-shape", sigma2=1)


def test_luckiness():
    w = Luckiness.indicator(1.0, 2.0)
    assert list(w(np.array([0.5, 1.0, 1.5, 2.0, 2.5]))) == [0, 1, 1, 1, 0]
    assert Luckiness.zero().is_zero
    smooth = Luckiness.smooth(lambda m: np.exp(-m * m), ((-math.inf, math.inf),))
    assert smooth(np.array([0.0]))[0] == 1.0
    with pytest.raises(ConfigError):
        Luckiness.indicator(2.0, 1.0)
    with pytest.raises(ConfigError):
        ModelSpec("gamma-known-shape", {}, Luckiness.indicator(-1.0, 2.0))


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(0.01, 5))
def test_luckiness_nonnegative(lo, width):
    w = Luckiness.indicator(lo, lo + width)
    vals = w(np.linspace(lo - 1, lo + width + 1, 101))
    assert np.all((vals == 0) | (vals == 1))


@pytest.mark.parametrize("model", ALL_MODELS, ids=_ids(ALL_MODELS))
def test_density_integrates_to_one(model):
    from nmlkit.quadrature import integrate_1d

    mu = mu_grid(model, 5)[2]
    lo, hi = model.data_domain[0]
    pts = [model.fixed_params["mean"]] if "mean" in model.fixed_params else None
    res = integrate_1d(lambda x: np.exp(log_density(model, x, mu)), (lo, hi), points=pts)
    assert res.value == pytest.approx(1.0, abs=1e-8)
