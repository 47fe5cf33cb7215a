import math

import numpy as np
import pytest

import mellinsurv as ms


def test_catalog_keys():
    assert "gamma_4_05" in ms.target_keys()
    assert set(ms.error_keys()) >= {"unif_0_1", "unif_half_3half", "beta_1_2"}
    assert "chi" in ms.config_keys()


def test_closed_forms():
    x = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(ms.survival("weibull_2", x), np.exp(-x**2), rtol=1e-14)
    assert abs(ms.complex_gamma(0.5) - math.sqrt(math.pi)) < 1e-14
    assert abs(ms.delta_g(1.0) - (1.0 + 4.0 * math.atan(2.0)) / math.pi) < 1e-4


def test_simulate_is_deterministic():
    a = ms.simulate(n=500, seed=3)
    b = ms.simulate(n=500, seed=3)
    assert a.shape == (500,)
    assert np.all(a > 0)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, ms.simulate(n=500, seed=4))


def test_estimate_fixed_and_adaptive():
    est = ms.estimate(np.array([0.7, 1.3, 2.1]), k=5)
    assert est["k_hat"] is None
    assert est["x"].shape == (2000,)
    assert np.all((est["survival_clipped"] >= 0) & (est["survival_clipped"] <= 1))
    assert est["x"][-1] == pytest.approx(4.2)

    y = ms.simulate(n=1000, target="weibull_2", seed=9)
    est = ms.estimate(y, heuristic=True)
    assert est["k"] == est["k_hat"] == ms.select_k(y)["k_hat"]
    assert np.all(np.diff(est["survival_heuristic"]) <= 0)
    truth = ms.survival("weibull_2", est["x"])
    assert np.max(np.abs(est["survival_clipped"] - truth)) < 0.15


def test_empirical_mellin():
    y = np.array([4.0])
    assert abs(ms.empirical_mellin(y, 0.0) - 2.0) < 1e-15


def test_mise_matches_csv_row_and_threads():
    one = ms.mise(target="weibull_2", n=300, reps=6, threads=1)
    two = ms.mise(target="weibull_2", n=300, reps=6, threads=2)
    assert one["csv_row"] == two["csv_row"]
    np.testing.assert_array_equal(one["ise"], two["ise"])
    assert one["mean_ise"] == pytest.approx(one["ise"].mean(), rel=1e-14)
    assert one["excluded"] == 0


def test_errors():
    with pytest.raises(ms.ConfigError, match="bogus"):
        ms.mise(bogus=1)
    with pytest.raises(ValueError):
        ms.simulate(target="nope")
    with pytest.raises(ms.NumericalError):
        ms.estimate(np.array([1.0]))
    with pytest.raises(ms.NumericalError):
        ms.empirical_mellin(np.array([-1.0]), 0.0)


def test_rate_fit():
    n = [500, 1000, 2000]
    slope, _ = ms.rate_fit(n, [1.0 / v for v in n], 1.0, 1.0)
    assert slope == pytest.approx(-1.0, abs=1e-12)
