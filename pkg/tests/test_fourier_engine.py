"""Fourier-inversion LPC: characteristic functions, diagonal densities, LPC paths."""

import cmath
import math

import numpy as np
import pytest

from nmlkit import Luckiness, QuadConfig, registry_get
from nmlkit.errors import IntegrabilityError
from nmlkit.fourier_engine import (
    PCResult,
    char_ratio,
    g_density,
    g_diag,
    lpc_fourier,
    lpc_gamma_known_scale,
    lpc_theorem1_mc,
    mle_char_fn_mc,
)
from nmlkit.models import MODEL_IDS, ExpFamilyModel, fisher_info
from nmlkit.quadrature import integrate_1d

from conftest import default_window, mu_grid

E = math.e
MODELS = [registry_get(mid) for mid in MODEL_IDS]

# mpmath quad of the data-space definition at n = 1, 30 digits
GAMMA_SCALE_N1 = [
    (1.0, (-1.0, 1.0), -0.1446713137782173),
    (2.0, (math.log(2) - 0.5, math.log(2) + 0.5), -0.8682672453860181),
]


def test_char_ratio_examples():
    normal = registry_get("normal-known-variance")
    assert char_ratio(normal, 0.0, 1.0, 1) == pytest.approx(math.exp(-0.5), abs=1e-15)
    expo = registry_get("gamma-known-shape", kappa=1)
    assert char_ratio(expo, 1.0, 2.0, 2) == pytest.approx(0.5j, abs=1e-15)


@pytest.mark.parametrize("model", MODELS, ids=MODEL_IDS)
@pytest.mark.parametrize("n", [2, 5, 10])
def test_char_ratio_invariants(model, n):
    omegas = np.concatenate([np.linspace(0.1, 10, 40), np.logspace(1, 4, 20)])
    for mu in mu_grid(model):
        assert char_ratio(model, mu, 0.0, n) == 1.0
        pos = char_ratio(model, mu, omegas, n)
        neg = char_ratio(model, mu, -omegas, n)
        assert np.max(np.abs(neg - np.conj(pos))) <= 1e-12
        assert np.max(np.abs(pos)) <= 1 + 1e-12


def test_g_diag_examples():
    normal = registry_get("normal-known-variance")
    for mu in (-3.0, 0.0, 11.0):
        assert g_diag(normal, mu, 4).value == pytest.approx(math.sqrt(4 / (2 * math.pi)), abs=1e-10)
    expo = registry_get("gamma-known-shape", kappa=1)
    assert g_diag(expo, 1.0, 3).value == pytest.approx(27 * math.exp(-3) / 2, abs=1e-9)
    with pytest.raises(IntegrabilityError):
        g_diag(expo, 1.0, 1)


def _smallest_n(model, floor):
    # alpha * n > 1 is needed for an integrable characteristic function
    return max(floor, int(math.floor(1.0 / model.char_decay_exponent)) + 1)


@pytest.mark.parametrize("model", MODELS, ids=MODEL_IDS)
def test_g_diag_nonnegative(model):
    n0 = _smallest_n(model, 2)
    for n in (n0, n0 + 1):
        for mu in mu_grid(model, 6):
            assert g_diag(model, mu, n).value >= -1e-8


@pytest.mark.parametrize("model", MODELS, ids=MODEL_IDS)
@pytest.mark.parametrize("extra", [0, 3])
def test_density_normalization(model, extra):
    n = _smallest_n(model, 2) + extra
    mu = mu_grid(model, 5)[2]
    cfg = QuadConfig(rel_tol=1e-7, abs_tol=1e-9)
    if model.expectation_domain[0][0] == 0.0:
        # log t; mass near zero decays only polynomially, the upper tail exponentially
        f = lambda u: np.array([g_density(model, mu, math.exp(v), n).value * math.exp(v) for v in u])
        span = (math.log(mu) - 14.0, math.log(mu) + 3.5)
    else:
        f = lambda u: np.array([g_density(model, mu, v, n).value for v in u])
        # 12 sd of the sample mean of T; covers the exponential left tail of log-gamma data
        sd = 1.0 / math.sqrt(n * float(np.squeeze(fisher_info(model, mu))))
        span = (mu - 12.0 * sd, mu + 12.0 * sd)
    res = integrate_1d(f, span, cfg)
    assert res.value == pytest.approx(1.0, abs=1e-4)


def _pair_model(s2):
    s2 = np.asarray(s2, dtype=float)

    def log_partition(eta):
        eta = np.asarray(eta, dtype=complex)
        return 0.5 * np.sum(s2 * eta ** 2, axis=-1)

    inf = (-math.inf, math.inf)
    return ExpFamilyModel(
        model_id="independent-normal-pair", fixed_params={}, param_dim=2, data_dim=2,
        canonical_domain=(inf, inf), expectation_domain=(inf, inf), data_domain=(inf, inf),
        log_partition=log_partition, sufficient_stat=lambda x: np.asarray(x, dtype=float),
        log_base_measure=lambda x: -0.5 * np.sum(np.asarray(x) ** 2 / s2, axis=-1),
        eta_of_mu=lambda mu: np.asarray(mu, dtype=float) / s2,
        mu_of_eta=lambda eta: np.asarray(eta, dtype=float) * s2,
        char_decay_exponent=math.inf, sample=None,
    )


def test_g_diag_two_parameters():
    model = _pair_model([1.0, 4.0])
    res = g_diag(model, np.array([0.2, -0.3]), 3)
    assert res.value == pytest.approx(3 / (2 * math.pi * 2.0), rel=1e-8)


def test_lpc_fourier_examples(exp_window, unit_window):
    normal = registry_get("normal-known-variance")
    assert lpc_fourier(normal, unit_window, 4).log_value == pytest.approx(-0.2257913526, abs=1e-9)
    expo = registry_get("gamma-known-shape", kappa=1)
    res = lpc_fourier(expo, exp_window, 3)
    assert res.log_value == pytest.approx(3 * math.log(3) - 3 - math.log(2), abs=1e-8)
    assert res.method == "fourier" and res.error_estimate < 1e-6


def test_lpc_zero_weight():
    res = lpc_fourier(registry_get("normal-known-variance"), Luckiness.zero(), 4)
    assert res.log_value == -math.inf and res.divergent
    assert lpc_gamma_known_scale(1.0, Luckiness.zero(), 4).divergent
    assert lpc_theorem1_mc(registry_get("normal-known-variance"), Luckiness.zero(), 4).divergent


@pytest.mark.parametrize("n", [1, 2, 3, 7, 50, 1000])
@pytest.mark.parametrize("sigma2", [1.0, 0.3])
def test_gaussian_row_exact(n, sigma2):
    model = registry_get("normal-known-variance", sigma2=sigma2)
    w = Luckiness.indicator(-0.4, 1.1)
    expect = 0.5 * math.log(n / (2 * math.pi)) + math.log(1.5 / math.sqrt(sigma2))
    assert lpc_fourier(model, w, n).log_value == pytest.approx(expect, abs=1e-8)


def test_lpc_fourier_smooth_weight():
    model = registry_get("normal-known-variance")
    w = Luckiness.smooth(lambda m: np.exp(-m * m / 2), ((-math.inf, math.inf),))
    expect = 0.5 * math.log(5 / (2 * math.pi)) + 0.5 * math.log(2 * math.pi)
    assert lpc_fourier(model, w, 5).log_value == pytest.approx(expect, abs=1e-7)


@pytest.mark.parametrize("beta, window, ref", GAMMA_SCALE_N1)
def test_gamma_known_scale_reference(beta, window, ref):
    w = Luckiness.indicator(*window)
    assert lpc_gamma_known_scale(beta, w, 1).log_value == pytest.approx(ref, abs=1e-9)
    assert lpc_fourier(registry_get("gamma-known-scale", beta=beta), w, 1).log_value == pytest.approx(ref, abs=1e-9)


def test_gamma_known_scale_two_paths():
    w = Luckiness.indicator(math.log(2) - 0.5, math.log(2) + 0.5)
    a = lpc_gamma_known_scale(2.0, w, 5)
    b = lpc_fourier(registry_get("gamma-known-scale", beta=2.0), w, 5)
    assert abs(a.value - b.value) <= 1e-5 * b.value
    around = Luckiness.indicator(-0.5772 - 0.2, -0.5772 + 0.2)
    assert lpc_gamma_known_scale(1.0, around, 3).value > 0


def test_pc_result_validation():
    with pytest.raises(Exception):
        PCResult(0.0, "bogus", 0.0, 1)
    with pytest.raises(Exception):
        PCResult(0.0, "fourier", -1.0, 1)


def test_mle_char_fn_examples():
    cfg = QuadConfig(seed=4, mc_samples=200_000)
    normal = registry_get("normal-known-variance")
    zero = mle_char_fn_mc(normal, 0.3, 0.0, 10, cfg)
    assert zero.value == 1 and zero.stderr_real == 0
    res = mle_char_fn_mc(normal, 0.3, 1.0, 10, cfg)
    assert abs(res.value.real - math.exp(-1 / 20)) <= 3 * res.stderr_real
    assert abs(res.value.imag) <= 3 * res.stderr_imag
    expo = registry_get("gamma-known-shape", kappa=1)
    res = mle_char_fn_mc(expo, 1.0, 1.0, 5, cfg)
    ref = char_ratio(expo, 1.0, 1.0, 5) * cmath.exp(-1j * 1.0)
    assert abs(res.value.real - ref.real) <= 3 * res.stderr_real
    assert abs(res.value.imag - ref.imag) <= 3 * res.stderr_imag


def test_mle_char_fn_deterministic():
    cfg = QuadConfig(seed=8, mc_samples=50_000)
    expo = registry_get("gamma-known-shape", kappa=2)
    assert mle_char_fn_mc(expo, 1.5, 2.0, 4, cfg) == mle_char_fn_mc(expo, 1.5, 2.0, 4, cfg)


def test_theorem1_quick(unit_window):
    normal = registry_get("normal-known-variance")
    cfg = QuadConfig(seed=2, mc_samples=160_000)
    mc = lpc_theorem1_mc(normal, unit_window, 10, cfg)
    exact = lpc_fourier(normal, unit_window, 10)
    assert mc.method == "theorem1_mc"
    assert abs(mc.log_value - exact.log_value) <= 3 * (mc.error_estimate + exact.error_estimate)
    with pytest.raises(IntegrabilityError):
        lpc_theorem1_mc(registry_get("gamma-known-shape"), Luckiness.indicator(1, 2), 1, cfg)
