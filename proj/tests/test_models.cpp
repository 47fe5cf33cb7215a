#include "mellinsurv/errors.hpp"
#include "mellinsurv/models.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

using namespace mellinsurv;

namespace {

// CDFs written out independently of the library's survival functions
double error_cdf(const std::string& key, double u)
{
  if (key == "unif_0_1")
    return std::clamp(u, 0.0, 1.0);
  if (key == "unif_half_3half")
    return std::clamp(u - 0.5, 0.0, 1.0);
  const double v = std::clamp(u, 0.0, 1.0);
  return 1.0 - (1.0 - v) * (1.0 - v); // beta_1_2
}

} // namespace

TEST_CASE("catalog keys")
{
  CHECK(target_keys() == std::vector<std::string>{"gamma_4_05", "weibull_2", "beta_4_5_scaled", "loggamma_0_4_3"});
  CHECK(error_keys() == std::vector<std::string>{"unif_0_1", "unif_half_3half", "beta_1_2"});
  for (const auto& k : target_keys())
    CHECK(target_by_key(k).name == k);
  for (const auto& k : error_keys())
    CHECK(error_by_key(k).name == k);
  CHECK_THROWS_AS(target_by_key("nope"), ConfigError);
  CHECK_THROWS_AS(error_by_key("uniform:1:0.5"), ConfigError);
  CHECK_THROWS_AS(target_by_key("gamma:-1:1"), ConfigError);
  CHECK_THROWS_AS(target_by_key("loggamma:0:4:0.5"), ConfigError);
  CHECK_THROWS_AS(target_by_key("weibull:abc"), ConfigError);
  CHECK(target_by_key("gamma:2:1").mean == doctest::Approx(2.0));
}

TEST_CASE("target invariants")
{
  for (const auto& m : catalog_targets()) {
    INFO(m.name);
    CHECK(m.survival(1e-300) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.survival(m.x_max_eff) <= 1e-4);
    CHECK(m.survival(m.x_max_eff * 0.99) > 1e-4);
    double prev = 1.0;
    for (double x = 0.01; x < m.x_max_eff * 1.5; x *= 1.05) {
      const double s = m.survival(x);
      CHECK(s <= prev);
      prev = s;
    }
    CHECK(m.norm2 > 0.0);
  }
}

TEST_CASE("closed-form values")
{
  const auto f1 = target_by_key("gamma_4_05");
  CHECK(f1.mean == 8.0);
  CHECK(f1.survival(0.0) == 1.0);
  const auto f2 = target_by_key("weibull_2");
  CHECK(std::abs(f2.mellin_f_32(0.0) - std::tgamma(0.25) / 4.0) < 1e-13);
  // scaled Beta(4,5) on (0,2) carries the constant 140
  const auto f3 = target_by_key("beta_4_5_scaled");
  CHECK(f3.density(1.0) == doctest::Approx(140.0 / 128.0).epsilon(1e-13));
  // Log-Gamma(0, 4, 3): constant 3^4 / Gamma(4) = 81/6
  const auto f4 = target_by_key("loggamma_0_4_3");
  CHECK(f4.density(std::numbers::e) == doctest::Approx(81.0 / 6.0 * std::exp(-4.0)).epsilon(1e-13));
  CHECK(f4.density(0.9) == 0.0);

  CHECK(std::abs(error_by_key("unif_0_1").mellin_g_32(0.0) - 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(error_by_key("beta_1_2").mellin_g_32(0.0) - 8.0 / 15.0) < 1e-15);
  const double g2 = (std::pow(1.5, 1.5) - std::pow(0.5, 1.5)) / 1.5;
  CHECK(std::abs(error_by_key("unif_half_3half").mellin_g_32(0.0) - g2) < 1e-14);
  // int_{1/2}^{3/2} u^{1/2} du
  CHECK(oracle::trapezoid([](double u) { return std::sqrt(u); }, 0.5, 1.5, 20001, false) ==
        doctest::Approx(g2).epsilon(1e-9));
  // error (a) and (c) against the product formula prod_j j / (c - 1 + j + it)
  for (double t : {-3.0, 0.7, 12.0}) {
    const cplx a = 1.0 / cplx(1.5, t);
    const cplx c = 2.0 / (cplx(1.5, t) * cplx(2.5, t));
    CHECK(std::abs(error_by_key("unif_0_1").mellin_g_32(t) - a) < 1e-15);
    CHECK(std::abs(error_by_key("beta_1_2").mellin_g_32(t) - c) < 1e-15);
  }
}

TEST_CASE("error model constants")
{
  const auto a = error_by_key("unif_0_1");
  CHECK(a.gamma_exponent == 1.0);
  CHECK(a.sigma_u == 0.5);
  CHECK(a.xg_sup == 1.0);
  const auto b = error_by_key("unif_half_3half");
  CHECK(b.gamma_exponent == 1.0);
  CHECK(b.sigma_u == 1.0);
  CHECK(b.xg_sup == 1.5);
  const auto c = error_by_key("beta_1_2");
  CHECK(c.gamma_exponent == 2.0);
  CHECK(c.sigma_u == doctest::Approx(1.0 / 3.0));
  CHECK(c.xg_sup == doctest::Approx(0.5)); // max of 2u(1-u)
}

TEST_CASE("survival identity on t in [-100, 100]")
{
  for (const auto& m : catalog_targets()) {
    double worst = 0.0;
    for (double t = -100.0; t <= 100.0; t += 0.37)
      worst = std::max(worst, std::abs(m.mellin_S_12(t) * cplx(0.5, t) - m.mellin_f_32(t)));
    INFO(m.name);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("closed forms agree with quadrature")
{
  std::vector<double> ts;
  for (int j = 0; j <= 20; ++j)
    ts.push_back(-50.0 + 5.0 * j);
  for (const auto& m : catalog_targets()) {
    const auto num = mellin_numeric(m.density, 1.5, ts, m.support);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      INFO(m.name << " t=" << ts[i]);
      CHECK(std::abs(num[i] - m.mellin_f_32(ts[i])) <= 1e-6);
    }
  }
  for (const auto& e : catalog_errors()) {
    const auto num = mellin_numeric(e.density, 1.5, ts, e.support);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      INFO(e.name << " t=" << ts[i]);
      CHECK(std::abs(num[i] - e.mellin_g_32(ts[i])) <= 1e-6);
    }
  }
}

TEST_CASE("[G0]/[G1] bracketing on [-200, 200]")
{
  for (const auto& e : catalog_errors()) {
    for (double t = -200.0; t <= 200.0; t += 0.25) {
      const double env = std::pow(1.0 + t * t, -e.gamma_exponent / 2.0);
      const double mod = std::abs(e.mellin_g_32(t));
      INFO(e.name << " t=" << t);
      CHECK(mod > 0.0);
      CHECK(mod >= e.c_lower * env * (1.0 - 1e-12));
      CHECK(mod <= e.c_upper * env * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("parameterised families integrate to one and satisfy the survival identity")
{
  for (const char* key : {"gamma:1:1", "gamma:0.7:3", "weibull:1.5", "lognormal:0.2:0.5", "loggamma:0.5:2:2",
                          "beta1:3", "scaled_beta:2:3:5"}) {
    const auto m = target_by_key(key);
    INFO(key);
    for (double t : {0.0, 2.0, -9.0})
      CHECK(std::abs(m.mellin_S_12(t) * cplx(0.5, t) - m.mellin_f_32(t)) <= 1e-10);
    const auto num = mellin_numeric(m.density, 1.5, 3.0, m.support);
    CHECK(std::abs(num - m.mellin_f_32(3.0)) <= 1e-6);
  }
  const auto e = error_by_key("beta1:3");
  CHECK(std::abs(e.mellin_g_32(1.0) - 6.0 / (cplx(1.5, 1.0) * cplx(2.5, 1.0) * cplx(3.5, 1.0))) < 1e-14);
  const auto none = error_by_key("noiseless");
  CHECK(none.point_mass);
  CHECK(none.mellin_g_32(17.0) == cplx(1.0));
}

TEST_CASE("samplers: determinism, moments, support")
{
  const auto f1 = target_by_key("gamma_4_05");
  Rng r1(42), r2(42);
  CHECK(f1.sample(r1, 100) == f1.sample(r2, 100));
  CHECK(f1.sample(r1, 0).empty());

  Rng rng(1);
  const std::size_t n = 100000;
  const auto x = f1.sample(rng, n);
  double mean = 0.0;
  for (double v : x)
    mean += v / n;
  CHECK(std::abs(mean - 8.0) <= 3.0 * 4.0 / std::sqrt(n));

  const auto f3 = target_by_key("beta_4_5_scaled");
  for (double v : f3.sample(rng, 10000))
    CHECK((v > 0.0 && v < 2.0));
}

TEST_CASE("samplers: Kolmogorov-Smirnov against model CDFs")
{
  const std::size_t n = 10000;
  const double crit = 1.95 / std::sqrt(static_cast<double>(n));
  Rng rng(2024);
  for (const auto& m : catalog_targets()) {
    // CDFs from Boost where available, otherwise 1 - S
    std::function<double(double)> cdf = [&](double x) { return 1.0 - m.survival(x); };
    if (m.name == "gamma_4_05")
      cdf = [](double x) { return boost::math::gamma_p(4.0, 0.5 * x); };
    else if (m.name == "weibull_2")
      cdf = [](double x) { return 1.0 - std::exp(-x * x); };
    INFO(m.name);
    CHECK(oracle::ks_statistic(m.sample(rng, n), cdf) <= crit);
  }
  for (const auto& e : catalog_errors()) {
    INFO(e.name);
    const std::string key = e.name;
    CHECK(oracle::ks_statistic(e.sample(rng, n), [&](double u) { return error_cdf(key, u); }) <= crit);
  }
}

TEST_CASE("contamination")
{
  const auto f1 = target_by_key("gamma_4_05");
  const auto a = error_by_key("unif_0_1");
  Rng rng(11);
  const auto x = f1.sample(rng, 1000);
  Rng rng2(12);
  const auto y = contaminate(x, a, rng2);
  REQUIRE(y.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK((y[i] > 0.0 && y[i] < x[i]));
  CHECK(contaminate({}, a, rng2).empty());

  const std::size_t n = 100000;
  const auto big = sample_contaminated(f1, a, n, rng);
  double mean = 0.0;
  for (double v : big)
    mean += v / n;
  // Var(Y) = E[X^2] E[U^2] - E[Y]^2 = 80 / 3 - 16
  CHECK(std::abs(mean - 4.0) <= 3.0 * std::sqrt((80.0 / 3.0 - 16.0) / n));
}
