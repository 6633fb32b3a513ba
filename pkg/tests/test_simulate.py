"""Generator tests: determinism, calibration against closed-form oracles."""

import math

import numpy as np
import pytest

from sysanom import (
    ArmaSpec,
    InvalidLength,
    LomaxSpec,
    NonCausalSpec,
    RngStream,
    TransferMode,
    arma_generate,
    lomax_quantile,
    lomax_sample,
    normal_sample,
    preset,
    scenario_generate,
    stock_arma,
)


def test_rng_stream_determinism():
    a = normal_sample(0.0, 1.0, 1000, RngStream(123, 5))
    b = normal_sample(0.0, 1.0, 1000, RngStream(123, 5))
    assert np.array_equal(a, b)


def test_rng_stream_separation():
    a = normal_sample(0.0, 1.0, 1000, RngStream(123, 0))
    b = normal_sample(0.0, 1.0, 1000, RngStream(123, 1))
    c = normal_sample(0.0, 1.0, 1000, RngStream(124, 0))
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_stream_cross_correlation_small():
    n = 10**5
    a = normal_sample(0.0, 1.0, n, RngStream(2024, 0))
    b = normal_sample(0.0, 1.0, n, RngStream(2024, 1))
    rho = float(np.corrcoef(a, b)[0, 1])
    assert abs(rho) < 0.01


def test_normal_sample_moments_and_edges():
    x = normal_sample(3.0, 2.0, 10**5, RngStream(9, 0))
    assert abs(float(np.mean(x)) - 3.0) < 0.05
    assert abs(float(np.std(x)) - 2.0) < 0.05
    const = normal_sample(5.0, 0.0, 10, RngStream(9, 0))
    assert (const == 5.0).all()
    with pytest.raises(ValueError):
        normal_sample(0.0, -1.0, 10, RngStream(9, 0))


def test_zero_length_rejected():
    with pytest.raises(InvalidLength):
        normal_sample(0.0, 1.0, 0, RngStream(1, 0))
    with pytest.raises(InvalidLength):
        lomax_sample(LomaxSpec(2.0), 0, RngStream(1, 0))
    with pytest.raises(InvalidLength):
        arma_generate(stock_arma(), 0, RngStream(1, 0))


def test_lomax_quantile_frozen():
    assert lomax_quantile(LomaxSpec(1.0, 1.0), 0.5) == 1.0
    assert lomax_quantile(LomaxSpec(2.0, 3.0), 0.0) == 0.0
    with pytest.raises(ValueError):
        lomax_quantile(LomaxSpec(1.0), 1.0)
    with pytest.raises(ValueError):
        lomax_quantile(LomaxSpec(1.0), -0.1)


def test_lomax_spec_validation_and_mean():
    assert LomaxSpec(11.0, 1.0).mean == pytest.approx(0.1)
    assert LomaxSpec(1.2, 1.0).mean == pytest.approx(5.0)
    assert LomaxSpec(1.0, 1.0).mean == math.inf  # no finite first moment
    with pytest.raises(ValueError):
        LomaxSpec(0.0)
    with pytest.raises(ValueError):
        LomaxSpec(2.0, -1.0)


def test_lomax_draws_nonnegative_and_cdf_calibrated():
    # empirical CDF at theoretical quantiles within a DKW-style band
    n = 10**5
    eps = math.sqrt(math.log(2.0 / 1e-6) / (2.0 * n))
    for shape in (1.2, 11.0):
        spec = LomaxSpec(shape, 1.0)
        x = lomax_sample(spec, n, RngStream(77, 3))
        assert (x >= 0.0).all()
        for q in (0.05, 0.25, 0.5, 0.75, 0.95):
            cutoff = lomax_quantile(spec, q)
            hit = float(np.mean(x <= cutoff))
            assert abs(hit - q) <= eps


def test_arma_spec_validation():
    with pytest.raises(NonCausalSpec):
        ArmaSpec(0.0, ar_coeffs=(1.0,))
    with pytest.raises(NonCausalSpec):
        ArmaSpec(0.0, ar_coeffs=(1.5,))
    with pytest.raises(ValueError):
        ArmaSpec(0.0, noise_sd=-1.0)
    with pytest.raises(ValueError):
        ArmaSpec(0.0, burn_in=-1)
    ArmaSpec(0.0, ar_coeffs=(0.99,))  # causal, fine


def test_stock_arma_frozen_parameters():
    spec = stock_arma()
    assert spec.mean == 120.0
    assert spec.ar_coeffs == (0.6,)
    assert spec.ma_coeffs == (0.4,)
    assert spec.noise_sd == pytest.approx(math.sqrt(5.76 / 1.64))
    assert spec.burn_in == 1000


def test_arma_white_noise_case():
    # no AR/MA terms: the recursion is mean + noise, still burn-in shifted
    spec = ArmaSpec(2.0, noise_sd=1.0, burn_in=10)
    x = arma_generate(spec, 5000, RngStream(5, 0))
    assert len(x) == 5000
    assert abs(float(np.mean(x)) - 2.0) < 0.05
    r = float(np.corrcoef(x[:-1], x[1:])[0, 1])
    assert abs(r) < 0.05


def test_arma_lag1_autocorrelation_matches_theory():
    # ARMA(1,1) oracle: rho_1 = (phi+theta)(1+phi*theta) / (1+2*phi*theta+theta^2)
    spec = stock_arma()
    phi, theta = spec.ar_coeffs[0], spec.ma_coeffs[0]
    rho_theory = (phi + theta) * (1.0 + phi * theta) / (1.0 + 2.0 * phi * theta + theta**2)
    x = arma_generate(spec, 10**5, RngStream(42, 0))
    rho_hat = float(np.corrcoef(x[:-1], x[1:])[0, 1])
    assert abs(rho_hat - rho_theory) <= 0.02


def test_arma_stock_mean_and_variance():
    x = arma_generate(stock_arma(), 10**5, RngStream(42, 0))
    assert abs(float(np.mean(x)) - 120.0) <= 0.2
    assert abs(float(np.var(x)) - 9.0) <= 0.5


def test_scenario_determinism_and_replication_streams():
    spec = preset("strict-tf3-a1.2", seed=7)
    g0 = scenario_generate(spec, replication=0)
    g0_again = scenario_generate(spec, replication=0)
    g1 = scenario_generate(spec, replication=1)
    assert np.array_equal(g0.sample.x, g0_again.sample.x)
    assert np.array_equal(g0.sample.y, g0_again.sample.y)
    assert not np.array_equal(g0.sample.x, g1.sample.x)


def test_scenario_channel_activation():
    # TF1 with an input anomaly listed leaves the output channel at zero
    spec = preset("strict-tf1-a11", seed=7)
    g = scenario_generate(spec, replication=0)
    assert (g.delta > 0.0).all()
    assert (g.eps == 0.0).all()
    spec2 = preset("strict-tf2-a11", seed=7)
    g2 = scenario_generate(spec2, replication=0)
    assert (g2.delta == 0.0).all()
    assert (g2.eps > 0.0).all()
    assert np.array_equal(g2.sample.y, g2.y_clean + g2.eps)


def test_precise_clamp_kills_input_anomaly():
    spec = preset("precise-tf1-a1.2", seed=7)
    g = scenario_generate(spec, replication=0)
    assert (g.sample.y == 120.0).all()


def test_anomaly_free_outputs_follow_baseline():
    spec = preset("satisfactory-none", seed=7)
    g = scenario_generate(spec, replication=0)
    assert (g.delta == 0.0).all() and (g.eps == 0.0).all()
    assert np.array_equal(g.sample.y, g.y_clean)
    assert (g.sample.y >= 114.0).all() and (g.sample.y <= 126.0).all()


def test_scenario_sample_shapes():
    spec = preset("strict-none", seed=3)
    g = scenario_generate(spec, replication=2)
    assert len(g.sample.x) == spec.n_max
    assert len(g.sample.y) == spec.n_max
    assert np.isfinite(g.sample.x).all()
    assert np.isfinite(g.sample.y).all()
    assert spec.mode is TransferMode.TF3
