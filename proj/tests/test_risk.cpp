#include "mellinsurv/errors.hpp"
#include "mellinsurv/risk.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace mellinsurv;

namespace {

SurvivalEstimate on_grid(const XGrid& xg, const std::function<double(double)>& v)
{
  const TGrid g(1.0, 0.5);
  SurvivalEstimate e{1.0, MellinSeries(g, std::vector<cplx>(g.size()), 0.5), xg.nodes(), {}, Variant::raw};
  for (double x : e.x)
    e.values.push_back(v(x));
  return e;
}

} // namespace

TEST_CASE("ise: exact estimate, zero estimate, incompatible grid")
{
  const auto f2 = target_by_key("weibull_2");
  XGrid xg{1e-6, f2.x_max_eff, 20000};
  CHECK(ise(on_grid(xg, f2.survival), f2) == 0.0);
  const double zero = ise(on_grid(xg, [](double) { return 0.0; }), f2);
  CHECK(std::abs(zero - std::sqrt(std::numbers::pi / 8.0)) <= 1e-3);
  xg.x_max = 0.5 * f2.x_max_eff;
  CHECK_THROWS_AS(ise(on_grid(xg, f2.survival), f2), DomainError);
}

TEST_CASE("ise: clipping never increases the error")
{
  Rng rng(101);
  const auto targets = catalog_targets();
  const auto a = error_by_key("unif_0_1");
  for (int inst = 0; inst < 50; ++inst) {
    const auto& f = targets[inst % targets.size()];
    EstimatorConfig cfg;
    cfg.x.x_max = f.x_max_eff;
    cfg.x.n_x = 300;
    const auto raw = spectral_cutoff(sample_contaminated(f, a, 40 + inst, rng), a, 1.0 + inst % 11, cfg);
    CHECK(ise(clip(raw), f) <= ise(raw, f));
  }
}

TEST_CASE("ise_mellin agrees with a wide x-space quadrature of the raw estimate")
{
  Rng rng(102);
  const auto f = target_by_key("gamma_4_05");
  const auto a = error_by_key("unif_0_1");
  EstimatorConfig cfg;
  cfg.x.x_min = 1e-6;
  cfg.x.x_max = 2000.0;
  cfg.x.n_x = 400000;
  const auto raw = spectral_cutoff(sample_contaminated(f, a, 500, rng), a, 4.0, cfg);
  std::vector<double> s(raw.x.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = f.survival(raw.x[i]);
  const double xspace = oracle::l2_sq(raw.x, raw.values, s);
  CHECK(std::abs(ise_mellin(raw, f) / xspace - 1.0) <= 0.02);
}

TEST_CASE("run_experiment: one replication reproduces a hand-built estimate")
{
  ExperimentSpec spec;
  spec.target = "weibull_2";
  spec.n = 300;
  spec.reps = 1;
  spec.seed = 17;
  const auto res = run_experiment(spec);
  REQUIRE(res.ise.size() == 1);

  Rng rng(derive_seed(17, 0));
  const auto f = target_by_key("weibull_2");
  const auto a = error_by_key("unif_0_1");
  auto x = f.sample(rng, 300);
  const auto y = contaminate(std::move(x), a, rng);
  EstimatorConfig cfg;
  cfg.x.x_max = f.x_max_eff;
  const auto sel = select_k(y, a, PenaltyConfig{}, cfg);
  const auto est = clip(spectral_cutoff(y, a, sel.k_hat, cfg));
  CHECK(res.k_hat[0] == sel.k_hat);
  CHECK(res.ise[0] == doctest::Approx(ise(est, f)).epsilon(1e-12));
  CHECK(res.mean_ise == res.ise[0]);
  CHECK(res.se == 0.0);
}

TEST_CASE("run_experiment: summary statistics and thread independence")
{
  ExperimentSpec spec;
  spec.target = "beta_4_5_scaled";
  spec.error = "beta_1_2";
  spec.n = 250;
  spec.reps = 12;
  spec.seed = 5;
  spec.threads = 1;
  const auto one = run_experiment(spec);
  spec.threads = 3;
  const auto three = run_experiment(spec);
  CHECK(one.ise == three.ise);
  CHECK(one.k_hat == three.k_hat);
  CHECK(one.mean_ise == three.mean_ise);
  double m = 0.0, ss = 0.0;
  for (double v : one.ise)
    m += v / 12.0;
  for (double v : one.ise)
    ss += (v - m) * (v - m);
  CHECK(one.mean_ise == doctest::Approx(m).epsilon(1e-14));
  CHECK(one.se == doctest::Approx(std::sqrt(ss / 11.0) / std::sqrt(12.0)).epsilon(1e-12));
  CHECK(one.excluded == 0);
}

TEST_CASE("run_experiment: validation")
{
  ExperimentSpec spec;
  spec.reps = 0;
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
  spec = {};
  spec.n = 0;
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
  spec = {};
  spec.target = "gamma_9";
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
  spec = {};
  spec.dependence = Dependence::ar1_gamma;
  spec.ar1.rho = -0.2;
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
  spec = {};
  spec.k_mode = KMode::fixed;
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
}

TEST_CASE("run_experiment: fixed cut-off and heuristic variant")
{
  ExperimentSpec spec;
  spec.target = "gamma_4_05";
  spec.n = 200;
  spec.reps = 5;
  spec.k_mode = KMode::fixed;
  spec.k_fixed = 3.0;
  const auto fixed = run_experiment(spec);
  CHECK(fixed.mean_k_hat == 3.0);
  spec.variant = Variant::heuristic;
  const auto heur = run_experiment(spec);
  CHECK(heur.excluded == 0);
  CHECK(heur.mean_ise > 0.0);
}

TEST_CASE("reference cells: table 1 (ii, 2000) and table 2 (m=1, rho=0.1, 500)")
{
  ExperimentSpec t1;
  t1.target = "weibull_2";
  t1.n = 2000;
  t1.reps = 200;
  const double v1 = 100.0 * run_experiment(t1).mean_ise;
  CHECK(v1 >= 0.02);
  CHECK(v1 <= 0.08);

  ExperimentSpec t2;
  t2.dependence = Dependence::ar1_gamma;
  t2.ar1 = {1, 1.0, 0.1};
  t2.n = 500;
  t2.reps = 200;
  const double v2 = 100.0 * run_experiment(t2).mean_ise;
  CHECK(v2 >= 0.075);
  CHECK(v2 <= 0.30);
}

TEST_CASE("error hardness ordering at n = 1000, target (ii)")
{
  ExperimentSpec spec;
  spec.target = "weibull_2";
  spec.n = 1000;
  spec.reps = 200;
  std::vector<double> mise;
  for (const char* e : {"unif_0_1", "unif_half_3half", "beta_1_2"}) {
    spec.error = e;
    mise.push_back(run_experiment(spec).mean_ise);
  }
  CHECK(mise[2] > mise[0]);
  CHECK(mise[2] > mise[1]);
}

TEST_CASE("oracle grid: consistent with the adaptive run")
{
  ExperimentSpec spec;
  spec.target = "weibull_2";
  spec.n = 300;
  spec.reps = 10;
  spec.variant = Variant::raw;
  const auto og = run_oracle_grid(spec);
  REQUIRE(og.k.size() == og.mean_ise.size());
  for (double v : og.mean_ise)
    CHECK(og.best_mean_ise <= v);
  CHECK(og.adaptive_mean_ise >= og.best_mean_ise);
  CHECK(og.mean_k_hat == doctest::Approx(run_experiment(spec).mean_k_hat).epsilon(1e-14));

  // risk at one k equals ise_mellin averaged over the same replications
  const int k = 3;
  double acc = 0.0;
  for (std::size_t r = 0; r < spec.reps; ++r) {
    Rng rng(derive_seed(spec.seed, r));
    const auto f = target_by_key("weibull_2");
    auto x = f.sample(rng, spec.n);
    const auto y = contaminate(std::move(x), error_by_key("unif_0_1"), rng);
    EstimatorConfig cfg;
    cfg.x.n_x = 2;
    acc += ise_mellin(spectral_cutoff(y, error_by_key("unif_0_1"), k, cfg), f) / spec.reps;
  }
  CHECK(og.mean_ise[k - 1] == doctest::Approx(acc).epsilon(1e-9));

  spec.k_mode = KMode::oracle_grid;
  const auto via_run = run_experiment(spec);
  CHECK(via_run.mean_ise == og.best_mean_ise);
  CHECK(via_run.mean_k_hat == og.best_k);
}

TEST_CASE("rate_fit")
{
  const std::vector<double> n = {500, 1000, 2000, 4000};
  std::vector<double> inv, two_thirds;
  for (double v : n) {
    inv.push_back(3.0 / v);
    two_thirds.push_back(0.7 * std::pow(v, -2.0 / 3.0));
  }
  CHECK(std::abs(rate_fit(n, inv, 1.0, 1.0).slope + 1.0) <= 1e-12);
  CHECK(std::abs(rate_fit(n, two_thirds, 1.0, 1.0).slope + 2.0 / 3.0) <= 1e-12);
  CHECK(rate_fit(n, inv, 1.0, 1.0).reference_slope == doctest::Approx(-2.0 / 3.0));
  CHECK_THROWS_AS(rate_fit({500, 1000}, {1.0, 0.5}, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(rate_fit({500, 500, 1000}, {1.0, 0.9, 0.5}, 1.0, 1.0), DomainError);

  std::vector<std::pair<std::size_t, MiseResult>> rs;
  for (std::size_t i = 0; i < n.size(); ++i) {
    MiseResult r;
    r.mean_ise = inv[i];
    rs.emplace_back(static_cast<std::size_t>(n[i]), r);
  }
  CHECK(std::abs(rate_fit(rs, 2.0, 1.0).slope + 1.0) <= 1e-12);
}

TEST_CASE("table_specs")
{
  const auto t1 = table_specs(1, ExperimentSpec{});
  const auto t2 = table_specs(2, ExperimentSpec{});
  CHECK(t1.size() == 12);
  CHECK(t2.size() == 18);
  std::set<std::uint64_t> s1, s2;
  for (const auto& s : t1)
    s1.insert(s.seed);
  for (const auto& s : t2)
    s2.insert(s.seed);
  CHECK(s1.size() == 12);
  CHECK(s2.size() == 18);
  CHECK(t2[0].target_key() == "gamma:1:1");
  CHECK(t2[17].ar1.m == 4);
  CHECK(t2[17].ar1.rho == 0.9);
  CHECK_THROWS_AS(table_specs(3, ExperimentSpec{}), ConfigError);
}
