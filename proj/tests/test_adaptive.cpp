#include "mellinsurv/adaptive.hpp"
#include "mellinsurv/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mellinsurv;

namespace {
constexpr double kStep = 1.0 / 128;
}

TEST_CASE("k_grid: error (a) at small n")
{
  const auto a = error_by_key("unif_0_1");
  // Delta_g(1) = (1 + 4 arctan 2) / pi for error (a)
  CHECK(delta_g(1.0, a, kStep) == doctest::Approx((1.0 + 4.0 * std::atan(2.0)) / std::numbers::pi).epsilon(1e-5));
  CHECK_THROWS_AS(k_grid(1, a, kStep), Error);
  CHECK(k_grid(2, a, kStep) == std::vector<int>{1});
}

// Delta_g(1) = 1.728 > 1 for error (a), so the admissible set for n = 1 is empty.
TEST_CASE("k_grid: n = 1, error (a) gives [1]" * doctest::should_fail())
{
  CHECK(k_grid(1, error_by_key("unif_0_1"), kStep) == std::vector<int>{1});
}

TEST_CASE("k_grid: prefix-closed, bounded, capped")
{
  const auto c = error_by_key("beta_1_2");
  const auto g = k_grid(500, c, kStep);
  REQUIRE(!g.empty());
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(g[i] == static_cast<int>(i) + 1);
  CHECK(delta_g(g.back(), c, kStep) <= 500.0);
  CHECK(delta_g(g.back() + 1, c, kStep) > 500.0);

  const auto g1000 = k_grid(1000, c, kStep);
  CHECK(g1000.back() <= 20.0 * std::cbrt(1000.0));

  const auto a = error_by_key("unif_0_1");
  const auto ga = k_grid(1000, a, kStep);
  // Delta_g(k) ~ k / pi for error (a), so the cap k <= n binds first
  CHECK(ga.size() == 1000);
  CHECK(delta_g(1000.0, a, kStep) <= 1000.0);
  CHECK(k_grid(1000, a, kStep, GridRule::delta_le_n, 5.0).back() == 5);
  // the literal rule is empty for every catalog error
  for (const auto& e : catalog_errors())
    CHECK_THROWS_AS(k_grid(1000, e, kStep, GridRule::delta_le_inv_n), Error);
}

TEST_CASE("grid rule names")
{
  CHECK(grid_rule_from_string(to_string(GridRule::delta_le_inv_n)) == GridRule::delta_le_inv_n);
  CHECK_THROWS_AS(grid_rule_from_string("sometimes"), ConfigError);
  PenaltyConfig p;
  CHECK(p.effective_chi() == 2.0);
  p.use_theoretical = true;
  CHECK(p.effective_chi() == 96.0);
  p = {};
  p.chi = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("sigma_y_hat")
{
  CHECK(sigma_y_hat(std::vector<double>{2.0, 4.0}) == 3.0);
  CHECK(sigma_y_hat(std::vector<double>{0.7, 0.7, 0.7}) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK_THROWS_AS(sigma_y_hat(std::vector<double>{}), DomainError);
  Rng rng(99);
  const std::size_t n = 100000;
  const auto y = sample_contaminated(target_by_key("gamma_4_05"), error_by_key("unif_0_1"), n, rng);
  CHECK(std::abs(sigma_y_hat(y) - 4.0) <= 3.0 * std::sqrt((80.0 / 3.0 - 16.0) / n));
}

TEST_CASE("select_k: singleton grid and huge chi")
{
  Rng rng(4);
  const auto a = error_by_key("unif_0_1");
  const auto y = sample_contaminated(target_by_key("gamma_4_05"), a, 300, rng);
  EstimatorConfig ecfg;
  ecfg.k_max = 1.0;
  CHECK(select_k(y, a, PenaltyConfig{}, ecfg).k_hat == 1);
  PenaltyConfig huge;
  huge.chi = 1e9;
  const auto r = select_k(y, a, huge, EstimatorConfig{});
  CHECK(r.k_hat == k_grid(300, a, kStep).front());
}

TEST_CASE("select_k: contrast terms match recomputation, penalty increasing")
{
  Rng rng(8);
  const auto c = error_by_key("beta_1_2");
  const auto y = sample_contaminated(target_by_key("weibull_2"), c, 400, rng);
  const PenaltyConfig pcfg;
  EstimatorConfig ecfg;
  ecfg.x.n_x = 10;
  const auto r = select_k(y, c, pcfg, ecfg);
  REQUIRE(r.contrast.size() == k_grid(400, c, kStep).size());
  CHECK(r.sigma_y_hat == sigma_y_hat(y));
  double best = 1e300;
  for (std::size_t i = 0; i < r.contrast.size(); ++i) {
    const auto& term = r.contrast[i];
    const double k = term.k;
    const double n2 = estimate_norm2(spectral_cutoff(y, c, k, ecfg));
    const double pen = 2.0 * 2.0 * sigma_y_hat(y) * delta_g(k, c, kStep) / 400.0;
    CHECK(std::abs(term.neg_norm2 + n2) <= 1e-10 * std::max(1.0, n2));
    CHECK(std::abs(term.penalty - pen) <= 1e-10 * std::max(1.0, pen));
    CHECK(term.total == doctest::Approx(term.neg_norm2 + term.penalty).epsilon(1e-15));
    if (i > 0)
      CHECK(term.penalty > r.contrast[i - 1].penalty);
    best = std::min(best, term.total);
  }
  for (const auto& term : r.contrast) {
    if (term.total == best) {
      CHECK(term.k == r.k_hat); // first attainer of the minimum
      break;
    }
  }
}

TEST_CASE("select_k: brute-force x-space contrast gives the same argmin")
{
  Rng rng(2718);
  const auto a = error_by_key("unif_0_1");
  const std::size_t n = 200;
  const auto y = sample_contaminated(target_by_key("gamma_4_05"), a, n, rng);
  // both sides search the same capped grid k = 1..20
  EstimatorConfig ecfg;
  ecfg.k_max = 20.0;
  const auto res = select_k(y, a, PenaltyConfig{}, ecfg);
  REQUIRE(res.contrast.size() == 20);

  // ||S_k||^2 by x-space trapezoid on a log grid over [1e-8, 1e6]
  const std::size_t N = 8001;
  std::vector<double> xs(N);
  for (std::size_t i = 0; i < N; ++i)
    xs[i] = 1e-8 * std::pow(1e14, static_cast<double>(i) / (N - 1));
  const std::vector<double> zero(N, 0.0);
  const double sigma = sigma_y_hat(y);
  int argmin = 0;
  double best = 1e300;
  for (int k = 1; k <= 20; ++k) {
    const auto H = [&](double t) { return empirical_mellin(y, t) / (std::complex<double>(0.5, t) * a.mellin_g_32(t)); };
    const TGrid g(k, kStep);
    const auto series = MellinSeries::tabulate(g, 0.5, H);
    const auto v = mellin_inverse(series, xs);
    const double norm2 = oracle::l2_sq(xs, v, zero);
    const double total = -norm2 + 2.0 * 2.0 * sigma * (k + 4.0 * std::atan(2.0 * k)) / std::numbers::pi / n;
    if (total < best) {
      best = total;
      argmin = k;
    }
  }
  CHECK(argmin == res.k_hat);
}

TEST_CASE("Selector rejects mismatched transforms")
{
  const auto a = error_by_key("unif_0_1");
  const Selector sel(a, 50, PenaltyConfig{}, EstimatorConfig{});
  Rng rng(1);
  const auto y = sample_contaminated(target_by_key("gamma_4_05"), a, 60, rng);
  const EmpiricalMellin m(y, sel.step(), sel.half_count());
  CHECK_THROWS_AS(sel.select(m, 1.0), DomainError);
  const std::vector<double> y50(y.begin(), y.begin() + 50);
  const EmpiricalMellin short_m(y50, sel.step(), sel.half_count() / 2);
  CHECK_THROWS_AS(sel.select(short_m, 1.0), DomainError);
}
