#include "mellinsurv/risk.hpp"

#include "mellinsurv/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>

namespace mellinsurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double trapezoid_sq_diff(const std::vector<double>& x, const std::vector<double>& a, const std::vector<double>& b)
{
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double d0 = a[i] - b[i];
    const double d1 = a[i + 1] - b[i + 1];
    acc += 0.5 * (x[i + 1] - x[i]) * (d0 * d0 + d1 * d1);
  }
  return acc;
}

unsigned resolve_threads(unsigned requested, std::size_t reps)
{
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(reps, 1)));
}

// Runs body(r) for r in [0, reps) on `threads` workers; body writes only to slot r.
template <class Body>
void parallel_reps(std::size_t reps, unsigned threads, bool progress, Body body)
{
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex io;
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= reps)
        return;
      body(r);
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(io);
        std::cerr << "\rreplication " << d << "/" << reps << std::flush;
        if (d == reps)
          std::cerr << "\n";
      }
    }
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i)
    pool.emplace_back(worker);
  for (auto& th : pool)
    th.join();
}

// Everything shared by the replications of one experiment.
struct Context
{
  TargetModel target;
  ErrorModel error;
  EstimatorConfig ecfg;
  std::vector<double> x;
  std::vector<double> truth;
  std::optional<Selector> selector;
  double fixed_k = 0.0;

  explicit Context(const ExperimentSpec& spec)
    : target(target_by_key(spec.target_key())), error(error_by_key(spec.error)), ecfg(spec.estimator)
  {
    if (ecfg.x.x_max == 0.0)
      ecfg.x.x_max = target.x_max_eff;
    x = ecfg.x.nodes();
    truth.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      truth[i] = target.survival(x[i]);
    if (spec.k_mode == KMode::fixed) {
      if (!(spec.k_fixed > 0.0) || (ecfg.k_max > 0.0 && spec.k_fixed > ecfg.k_max))
        throw ConfigError("fixed cut-off must lie in (0, k_max]");
      fixed_k = TGrid::covering(spec.k_fixed, ecfg.t_step).half_width();
    } else {
      selector.emplace(error, spec.n, spec.penalty, ecfg);
    }
  }

  std::vector<double> draw(const ExperimentSpec& spec, std::size_t r) const
  {
    Rng rng(derive_seed(spec.seed, r));
    std::vector<double> latent = spec.dependence == Dependence::iid ? target.sample(rng, spec.n)
                                                                    : sample_ar1_gamma(spec.n, spec.ar1, rng);
    return contaminate(std::move(latent), error, rng);
  }
};

struct RepOutcome
{
  bool ok = false;
  double ise = 0.0;
  double k = 0.0;
  std::string failure;
};

RepOutcome replicate(const ExperimentSpec& spec, const Context& ctx, std::size_t r)
{
  RepOutcome out;
  try {
    const std::vector<double> y = ctx.draw(spec, r);
    double k = ctx.fixed_k;
    std::optional<EmpiricalMellin> mhat;
    if (spec.k_mode == KMode::fixed) {
      const TGrid grid = TGrid::covering(k, ctx.ecfg.t_step);
      mhat.emplace(y, grid.step(), grid.half_count());
    } else {
      mhat.emplace(y, ctx.selector->step(), ctx.selector->half_count());
      k = ctx.selector->select(*mhat, sigma_y_hat(y)).k_hat;
    }
    SurvivalEstimate est = spec.variant == Variant::heuristic ? heuristic_survival(*mhat, ctx.error, k, ctx.ecfg)
                                                              : spectral_cutoff(*mhat, ctx.error, k, ctx.ecfg);
    if (spec.variant == Variant::clipped)
      est = clip(std::move(est));
    out.ise = trapezoid_sq_diff(est.x, est.values, ctx.truth);
    out.k = k;
    out.ok = true;
  } catch (const Error& e) {
    out.failure = "replication " + std::to_string(r) + ": " + e.what();
  }
  return out;
}

MiseResult reduce(const std::vector<RepOutcome>& outcomes)
{
  MiseResult res;
  for (const auto& o : outcomes) {
    if (o.ok) {
      res.ise.push_back(o.ise);
      res.k_hat.push_back(o.k);
    } else {
      ++res.excluded;
      res.failures.push_back(o.failure);
    }
  }
  const double total = static_cast<double>(outcomes.size());
  if (static_cast<double>(res.excluded) > kMaxExcludedFraction * total || res.ise.empty()) {
    std::string msg = std::to_string(res.excluded) + " of " + std::to_string(outcomes.size()) +
                      " replications failed";
    if (!res.failures.empty())
      msg += " (first: " + res.failures.front() + ")";
    throw Error(msg);
  }
  const double r = static_cast<double>(res.ise.size());
  double sum = 0.0, sum_k = 0.0;
  for (std::size_t i = 0; i < res.ise.size(); ++i) {
    sum += res.ise[i];
    sum_k += res.k_hat[i];
  }
  res.mean_ise = sum / r;
  res.mean_k_hat = sum_k / r;
  double ss = 0.0;
  for (double v : res.ise)
    ss += (v - res.mean_ise) * (v - res.mean_ise);
  res.se = res.ise.size() > 1 ? std::sqrt(ss / (r - 1.0)) / std::sqrt(r) : 0.0;
  return res;
}

} // namespace

std::string_view to_string(Dependence d) noexcept
{
  return d == Dependence::iid ? "iid" : "ar1_gamma";
}

std::string_view to_string(KMode k) noexcept
{
  switch (k) {
    case KMode::adaptive: return "adaptive";
    case KMode::fixed: return "fixed";
    case KMode::oracle_grid: return "oracle";
  }
  return "adaptive";
}

void ExperimentSpec::validate() const
{
  if (n < 1)
    throw ConfigError("n must be at least 1");
  if (reps < 1)
    throw ConfigError("reps must be at least 1");
  estimator.validate();
  penalty.validate();
  if (dependence == Dependence::ar1_gamma) {
    ar1.validate();
    if (ar1.rho < 0.0)
      throw ConfigError("ar1_gamma: binomial thinning needs rho >= 0");
  }
  if (k_mode == KMode::fixed && !(k_fixed > 0.0))
    throw ConfigError("fixed cut-off must be positive");
  // resolve keys early so typos fail before any work is done
  (void)error_by_key(error);
  if (dependence == Dependence::iid)
    (void)target_by_key(target);
}

std::string ExperimentSpec::target_key() const
{
  if (dependence == Dependence::iid)
    return target;
  char buf[64];
  std::snprintf(buf, sizeof buf, "gamma:%d:%.17g", ar1.m, ar1.lambda);
  return buf;
}

double ise(const SurvivalEstimate& est, const TargetModel& truth)
{
  if (est.x.size() < 2 || est.values.size() != est.x.size())
    throw DomainError("ise: estimate has no usable x-grid");
  if (est.x.back() < truth.x_max_eff * (1.0 - 1e-9))
    throw DomainError("ise: estimate grid ends before the target's x_max_eff");
  std::vector<double> s(est.x.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = truth.survival(est.x[i]);
  return trapezoid_sq_diff(est.x, est.values, s);
}

double ise_mellin(const SurvivalEstimate& raw, const TargetModel& truth)
{
  const MellinSeries& c = raw.coeffs;
  double cross = 0.0;
  for (std::size_t j = 0; j < c.values.size(); ++j) {
    const cplx ms = truth.mellin_S_12(c.grid.node(j));
    cross += c.grid.weight(j) * (std::norm(c.values[j]) - 2.0 * std::real(c.values[j] * std::conj(ms)));
  }
  return std::max(0.0, truth.norm2 + cross / kTwoPi);
}

MiseResult run_experiment(const ExperimentSpec& spec)
{
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  if (spec.k_mode == KMode::oracle_grid) {
    const OracleGridResult og = run_oracle_grid(spec);
    MiseResult res;
    res.mean_ise = og.best_mean_ise;
    res.mean_k_hat = og.best_k;
    res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }
  const Context ctx(spec);
  std::vector<RepOutcome> outcomes(spec.reps);
  parallel_reps(spec.reps, resolve_threads(spec.threads, spec.reps), spec.progress,
                [&](std::size_t r) { outcomes[r] = replicate(spec, ctx, r); });
  MiseResult res = reduce(outcomes);
  res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

OracleGridResult run_oracle_grid(const ExperimentSpec& spec)
{
  spec.validate();
  const Context ctx(spec);
  const Selector& sel = *ctx.selector;
  const std::size_t k_last = static_cast<std::size_t>(sel.grid().back());
  const auto per_unit = static_cast<std::size_t>(std::llround(1.0 / sel.step()));
  const double h = sel.step();

  // cumulative (2 pi)^{-1} int_{-k}^{k} -2 Re(c conj(M_S)) dt needs M_S and the weights once
  const std::vector<cplx> w = inverse_weights(ctx.error, h, sel.half_count());
  std::vector<cplx> ms(sel.half_count() + 1);
  for (std::size_t m = 0; m < ms.size(); ++m)
    ms[m] = ctx.target.mellin_S_12(static_cast<double>(m) * h);

  std::vector<std::vector<double>> per_rep(spec.reps);
  std::vector<double> adaptive(spec.reps, 0.0);
  std::vector<double> k_hat(spec.reps, 0.0);
  std::vector<std::string> failures(spec.reps);
  parallel_reps(spec.reps, resolve_threads(spec.threads, spec.reps), spec.progress, [&](std::size_t r) {
    try {
      const std::vector<double> y = ctx.draw(spec, r);
      const EmpiricalMellin mhat(y, h, sel.half_count());
      const auto& v = mhat.half_values();
      std::vector<double> risk(k_last + 1, ctx.target.norm2);
      double running = 0.0;
      double f0 = 0.0;
      for (std::size_t m = 0; m <= sel.half_count(); ++m) {
        const cplx c = v[m] * w[m];
        const double f = std::norm(c) - 2.0 * std::real(c * std::conj(ms[m]));
        if (m == 0)
          f0 = f;
        running += h * f;
        if (m > 0 && m % per_unit == 0)
          risk[m / per_unit] = std::max(0.0, ctx.target.norm2 + 2.0 * (running - 0.5 * h * (f0 + f)) / kTwoPi);
      }
      const int kh = sel.select(mhat, sigma_y_hat(y)).k_hat;
      adaptive[r] = risk[static_cast<std::size_t>(kh)];
      k_hat[r] = kh;
      per_rep[r] = std::move(risk);
    } catch (const Error& e) {
      failures[r] = e.what();
    }
  });
  for (std::size_t r = 0; r < spec.reps; ++r)
    if (!failures[r].empty())
      throw Error("oracle grid: replication " + std::to_string(r) + " failed: " + failures[r]);

  OracleGridResult res;
  res.k = sel.grid();
  const double reps = static_cast<double>(spec.reps);
  for (int k : res.k) {
    double acc = 0.0;
    for (const auto& rr : per_rep)
      acc += rr[static_cast<std::size_t>(k)];
    res.mean_ise.push_back(acc / reps);
  }
  for (std::size_t r = 0; r < spec.reps; ++r) {
    res.adaptive_mean_ise += adaptive[r] / reps;
    res.mean_k_hat += k_hat[r] / reps;
  }
  const auto best = std::min_element(res.mean_ise.begin(), res.mean_ise.end());
  res.best_k = res.k[static_cast<std::size_t>(best - res.mean_ise.begin())];
  res.best_mean_ise = *best;
  return res;
}

RateFit rate_fit(const std::vector<double>& n, const std::vector<double>& mise, double s, double gamma)
{
  if (n.size() != mise.size())
    throw DomainError("rate_fit: n and MISE lengths differ");
  std::vector<double> distinct = n;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3)
    throw DomainError("rate_fit: need at least 3 distinct sample sizes");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double k = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(mise[i] > 0.0))
      throw DomainError("rate_fit: sample sizes and MISE values must be positive");
    const double lx = std::log(n[i]);
    const double ly = std::log(mise[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  RateFit fit;
  fit.n = n;
  fit.mise = mise;
  fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / k;
  fit.s = s;
  fit.gamma = gamma;
  fit.reference_slope = -2.0 * s / (2.0 * s + 2.0 * gamma - 1.0);
  return fit;
}

RateFit rate_fit(const std::vector<std::pair<std::size_t, MiseResult>>& results, double s, double gamma)
{
  std::vector<double> n, mise;
  for (const auto& [size, res] : results) {
    n.push_back(static_cast<double>(size));
    mise.push_back(res.mean_ise);
  }
  return rate_fit(n, mise, s, gamma);
}

std::vector<ExperimentSpec> table_specs(int which, const ExperimentSpec& base)
{
  static const std::size_t sizes[] = {500, 1000, 2000};
  std::vector<ExperimentSpec> out;
  if (which == 1) {
    for (const std::string& key : target_keys()) {
      for (std::size_t n : sizes) {
        ExperimentSpec s = base;
        s.dependence = Dependence::iid;
        s.target = key;
        s.error = "unif_0_1";
        s.n = n;
        out.push_back(s);
      }
    }
  } else if (which == 2) {
    for (int m : {1, 4}) {
      for (double rho : {0.1, 0.5, 0.9}) {
        for (std::size_t n : sizes) {
          ExperimentSpec s = base;
          s.dependence = Dependence::ar1_gamma;
          s.ar1 = Ar1GammaConfig{m, 1.0, rho};
          s.error = "unif_0_1";
          s.n = n;
          out.push_back(s);
        }
      }
    }
  } else {
    throw ConfigError("table must be 1 or 2");
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].seed = derive_seed(base.seed, 1000 + i);
  return out;
}

} // namespace mellinsurv
