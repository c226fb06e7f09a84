import math

import numpy as np
import pytest
from scipy import integrate, stats
from scipy.special import comb

from phasesynth import rng as streams
from phasesynth.errors import ConfigError, DegenerateDistributionError, DimensionError
from phasesynth.mpe import (
    MAX_POVM_RESOURCE,
    delta_n,
    estimate_phases,
    holevo_spread_se,
    holevo_variance,
    mpe_fidelity,
    normalize_mode,
    povm_cdf,
    povm_density,
    probe_amplitudes,
    sample_errors,
    variance_stats,
)
from phasesynth.phasecore import PhaseImage


def _density_direct(N, d):
    c = np.sqrt(np.array([comb(N, m, exact=True) for m in range(N + 1)], dtype=float) / 2 ** N)
    return abs(np.sum(c * np.exp(1j * np.arange(N + 1) * d))) ** 2 / (2 * math.pi)


def _quad_product(N):
    """Holevo spread times sqrt(N)/2 for the exact density, by quadrature."""
    r, _ = integrate.quad(lambda d: povm_density(N, d) * math.cos(d), -math.pi, math.pi,
                          limit=400, epsabs=1e-13)
    return math.sqrt((1 - r * r) / (r * r)) * math.sqrt(N) / 2


def test_density_n1_at_zero():
    assert povm_density(1, 0.0) == pytest.approx(1 / math.pi, rel=1e-14)


def test_probe_amplitudes_normalised():
    for N in (1, 7, 64, 1000):
        assert np.sum(probe_amplitudes(N) ** 2) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("N", [1, 2, 5, 16, 64])
def test_density_integrates_to_one_and_is_even(N):
    total, _ = integrate.quad(lambda d: povm_density(N, d), -math.pi, math.pi,
                              limit=400, epsabs=1e-12)
    assert total == pytest.approx(1.0, abs=1e-8)
    d = np.linspace(0.01, 3.1, 37)
    np.testing.assert_allclose(povm_density(N, d), povm_density(N, -d), rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(povm_density(N, d), [_density_direct(N, x) for x in d],
                               rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize("N", [1, 4, 32])
def test_cdf_matches_quadrature(N):
    for x in (-2.5, -0.7, 0.0, 0.3, 1.9, math.pi):
        ref, _ = integrate.quad(lambda d: povm_density(N, d), -math.pi, x, limit=400, epsabs=1e-13)
        assert povm_cdf(N, x) == pytest.approx(ref, abs=1e-9)


@pytest.mark.parametrize("N", [1, 8, 64])
def test_povm_sampler_ks(N):
    e = sample_errors(N, "povm-oracle", seed=3, stream=9, size=20_000)
    res = stats.kstest(e, lambda x: povm_cdf(N, x))
    assert res.pvalue > 1e-3


def test_analytic_sampler_is_normal():
    e = sample_errors(25, "analytic", seed=1, stream=9, size=50_000)
    assert stats.kstest(e * 5, "norm").pvalue > 1e-3


def test_povm_resource_cap():
    with pytest.raises(ConfigError):
        sample_errors(MAX_POVM_RESOURCE + 1, "povm", 0, 1, 10)
    sample_errors(MAX_POVM_RESOURCE + 1, "analytic", 0, 1, 10)


@pytest.mark.parametrize("bad", [0, -3, 2.5, True])
def test_bad_resource(bad):
    with pytest.raises(ConfigError):
        delta_n(bad)


def test_modes():
    assert normalize_mode("povm") == "povm-oracle"
    with pytest.raises(ConfigError):
        normalize_mode("magic")


def test_analytic_large_resource_is_accurate():
    img = PhaseImage(6, np.linspace(0.05, 1.5, 4096))
    est = estimate_phases(img, 10 ** 6, "analytic", seed=11, stream=streams.CARRIER)
    assert np.max(np.abs(est.estimates - img.phases)) < 0.01


def test_estimates_deterministic_and_stream_separated():
    img = PhaseImage(2, np.full(16, 0.7))
    a = estimate_phases(img, 4, "povm", seed=5, stream=1)
    b = estimate_phases(img, 4, "povm", seed=5, stream=1)
    c = estimate_phases(img, 4, "povm", seed=5, stream=2)
    assert np.array_equal(a.estimates, b.estimates)
    assert not np.array_equal(a.estimates, c.estimates)
    assert np.all((a.estimates > 0) & (a.estimates <= math.pi / 2))


def test_exact_mode_returns_truth():
    ph = np.linspace(0.1, 1.4, 16)
    est = estimate_phases(PhaseImage(2, ph), 1, "exact")
    assert np.array_equal(est.estimates, ph)


@pytest.mark.parametrize("a", [0.1, 0.5, 1.2])
def test_holevo_two_point(a):
    assert holevo_variance([a, -a]) == pytest.approx(math.tan(a) ** 2, rel=1e-12)


def test_holevo_wrapped_normal():
    s = sample_errors(1, "analytic", seed=2, stream=1, size=200_000) * 0.1
    spread = math.sqrt(holevo_variance(s))
    assert spread == pytest.approx(math.sqrt(math.exp(0.01) - 1), rel=0.05)
    assert math.sqrt(math.exp(0.01) - 1) == pytest.approx(0.10025, abs=1e-5)


def test_holevo_degenerate():
    with pytest.raises(DegenerateDistributionError):
        holevo_variance([0.0])
    with pytest.raises(DegenerateDistributionError):
        holevo_variance([0.0, math.pi])


def test_spread_se_against_bootstrap():
    s = sample_errors(4, "povm", seed=8, stream=1, size=4000)
    se = holevo_spread_se(s)
    g = np.random.default_rng(0)
    boot = [math.sqrt(holevo_variance(s[g.integers(0, s.size, s.size)])) for _ in range(400)]
    assert se == pytest.approx(np.std(boot, ddof=1), rel=0.15)


@pytest.mark.parametrize("N", [1, 2, 4, 8, 16, 32])
def test_spread_bound_exact_and_sampled(N):
    exact = _quad_product(N)
    assert exact >= 0.5
    st = variance_stats(sample_errors(N, "povm", seed=4, stream=1, size=100_000), N)
    assert isinstance(st.product_se, float)
    assert abs(st.product - exact) < 4 * st.product_se


def test_spread_decreases_with_resource():
    spreads = [variance_stats(sample_errors(N, "povm", 0, 1, 20_000), N).delta_phi
               for N in (1, 4, 16, 64, 256)]
    assert all(a > b for a, b in zip(spreads, spreads[1:]))


def _fidelity_double_sum(r):
    r = np.concatenate([[0.0], r])
    d = r.size
    return sum(math.cos(a - b) for a in r for b in r) / d ** 2


def test_fidelity_literal_formula(rng):
    t = rng.uniform(0, 1.5, 12)
    e = t + rng.normal(0, 0.3, 12)
    assert mpe_fidelity(t, e) == pytest.approx(_fidelity_double_sum(e - t), abs=1e-13)
    assert mpe_fidelity(t, t) == 1.0


def test_fidelity_length_checks():
    with pytest.raises(DimensionError):
        mpe_fidelity([0.1, 0.2], [0.1])
    with pytest.raises(DimensionError):
        mpe_fidelity([0.1], [0.1], d=3)
