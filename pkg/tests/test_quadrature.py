"""Integration engines on integrals with known values."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nmlkit.errors import ConfigError, IntegrabilityError, NonConvergence, UnsupportedDimension
from nmlkit.quadrature import (
    QuadConfig,
    fourier_inverse,
    integrate_1d,
    integrate_nd,
    monte_carlo,
    wynn_epsilon,
)


def test_config_validation():
    with pytest.raises(ConfigError):
        QuadConfig(rel_tol=0)
    with pytest.raises(ConfigError):
        QuadConfig(grid_points_per_dim=256)
    assert QuadConfig().replace(seed=5).seed == 5


def test_inverse_x():
    res = integrate_1d(lambda x: 1 / x, (1, math.e))
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.error_estimate <= 1e-8


def test_normal_density_whole_line():
    res = integrate_1d(lambda x: np.exp(-x * x / 2) / math.sqrt(2 * math.pi), (-math.inf, math.inf))
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_gamma_four():
    res = integrate_1d(lambda x: x ** 3 * np.exp(-x), (0, math.inf))
    assert res.value == pytest.approx(6.0, rel=1e-10)


def test_breakpoints_for_jump():
    f = lambda x: np.where(x < 0.3, 1.0, 2.0)
    res = integrate_1d(f, (0, 1), points=[0.3])
    assert res.value == pytest.approx(0.3 + 1.4, abs=1e-13)


def test_nonconvergence_carries_estimate():
    cfg = QuadConfig(max_subdivisions=3)
    with pytest.raises(NonConvergence) as info:
        integrate_1d(lambda x: np.sin(1 / x), (1e-6, 1), cfg)
    assert math.isfinite(info.value.value)


def test_wynn_epsilon_alternating_series():
    partial = np.cumsum([(-1) ** k / (k + 1) for k in range(15)])
    limit, err = wynn_epsilon(partial)
    assert limit == pytest.approx(math.log(2), abs=1e-9)


def test_fourier_normal_at_mean():
    c = 0.7
    res = fourier_inverse(lambda w: np.exp(1j * w * c - w * w / 2), c, math.inf)
    assert res.value == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-10)


def test_fourier_gamma_power_tail():
    res = fourier_inverse(lambda w: (1 / (1 - 1j * w / 3)) ** 3, 1.0, 3.0)
    assert res.value == pytest.approx(27 * math.exp(-3) / 2, abs=1e-7)
    assert res.truncation_bound >= 0


def test_fourier_rejects_non_integrable():
    with pytest.raises(IntegrabilityError):
        fourier_inverse(lambda w: np.ones_like(w, dtype=complex), 0.0, 0.0)
    with pytest.raises(IntegrabilityError):
        fourier_inverse(lambda w: 1 / (1 - 1j * w), 1.0, 1.0)


@settings(max_examples=10, deadline=None)
@given(st.floats(1.2, 12.0), st.floats(0.5, 4.0))
def test_fourier_reproduces_gamma_densities(shape, rate):
    # 50-point grid against the closed-form gamma density
    phi = lambda w: np.exp(-shape * np.log1p(-1j * w / rate))
    ts = np.linspace(0.05, 3.0 * shape / rate, 50)
    got = np.array([fourier_inverse(phi, t, shape).value for t in ts])
    ref = np.exp(shape * math.log(rate) + (shape - 1) * np.log(ts) - rate * ts - math.lgamma(shape))
    assert np.max(np.abs(got - ref)) <= 1e-6


def test_error_estimate_calibration():
    # reported errors bound true errors on a small corpus of closed forms
    cases = [
        ((lambda w, k=k: (1 / (1 - 1j * w / k)) ** k), 1.0, float(k),
         k ** k * math.exp(-k) / math.gamma(k)) for k in range(2, 12)
    ] + [((lambda w, s=s: np.exp(-s * s * w * w / 2)), 0.0, math.inf, 1 / (s * math.sqrt(2 * math.pi)))
         for s in (0.1, 0.5, 1.0, 3.0, 10.0)]
    hits = 0
    for phi, t, alpha, ref in cases:
        res = fourier_inverse(phi, t, alpha)
        hits += abs(res.value - ref) <= max(res.total_error, 1e-15)
    assert hits >= 0.95 * len(cases)


def test_nd_unit_square():
    res = integrate_nd(lambda p: np.ones(len(p)), [(0, 1), (0, 1)])
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_nd_exponential_quadrant():
    res = integrate_nd(lambda p: np.exp(-p[:, 0] - p[:, 1]), [(0, math.inf), (0, math.inf)])
    assert res.value == pytest.approx(1.0, abs=1e-6)


def test_nd_max_order_statistic():
    res = integrate_nd(lambda p: np.max(p, axis=1), [(0, 1), (0, 1)])
    assert res.value == pytest.approx(2 / 3, abs=1e-5)
    # kinks near an edge can hide between Kronrod nodes of the first panel
    ada = integrate_nd(lambda p: np.max(p, axis=1), [(0, 1), (0, 1)], method="adaptive")
    assert ada.value == pytest.approx(2 / 3, abs=1e-6)


def test_nd_three_dims_and_limit():
    res = integrate_nd(lambda p: p[:, 0] * p[:, 1] * p[:, 2], [(0, 1)] * 3, QuadConfig(grid_points_per_dim=33))
    assert res.value == pytest.approx(0.125, abs=1e-10)
    with pytest.raises(UnsupportedDimension):
        integrate_nd(lambda p: p[:, 0], [(0, 1)] * 4)


def _normal(rng, count):
    return rng.standard_normal(count)


def test_mc_constant():
    res = monte_carlo(lambda x: np.ones_like(x), _normal, samples=1000)
    assert res.value == 1.0 and res.error_estimate == 0.0


def test_mc_moments():
    cfg = QuadConfig(seed=42)
    first = monte_carlo(lambda x: x, _normal, cfg)
    second = monte_carlo(lambda x: x * x, _normal, cfg)
    assert abs(first.value) <= 3 * first.error_estimate
    assert abs(second.value - 1.0) <= 3 * second.error_estimate


def test_mc_deterministic():
    cfg = QuadConfig(seed=9, mc_samples=200_000)
    a = monte_carlo(np.cos, _normal, cfg)
    b = monte_carlo(np.cos, _normal, cfg)
    assert (a.value, a.error_estimate) == (b.value, b.error_estimate)
