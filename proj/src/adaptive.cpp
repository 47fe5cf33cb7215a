#include "mellinsurv/adaptive.hpp"

#include "mellinsurv/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mellinsurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t steps_per_unit(double t_step)
{
  const double r = 1.0 / t_step;
  if (!(t_step > 0.0) || std::abs(r - std::round(r)) > 1e-9 * r)
    throw ConfigError("the t-step must divide 1 for integer cut-offs");
  return static_cast<std::size_t>(std::llround(r));
}

} // namespace

std::string_view to_string(GridRule r) noexcept
{
  return r == GridRule::delta_le_n ? "delta_le_n" : "delta_le_inv_n";
}

GridRule grid_rule_from_string(std::string_view s)
{
  if (s == "delta_le_n")
    return GridRule::delta_le_n;
  if (s == "delta_le_inv_n")
    return GridRule::delta_le_inv_n;
  throw ConfigError("unknown grid rule '" + std::string(s) + "' (delta_le_n|delta_le_inv_n)");
}

void PenaltyConfig::validate() const
{
  if (!(effective_chi() > 0.0) || !std::isfinite(effective_chi()))
    throw ConfigError("chi must be positive");
}

std::vector<int> k_grid(std::size_t n, const ErrorModel& error, double t_step, GridRule rule, double k_cap)
{
  if (n == 0)
    throw DomainError("k_grid: n must be at least 1");
  std::size_t k_last = n;
  if (k_cap > 0.0)
    k_last = std::min<std::size_t>(k_last, static_cast<std::size_t>(std::floor(k_cap + 1e-9)));
  const double bound = rule == GridRule::delta_le_n ? static_cast<double>(n) : 1.0 / static_cast<double>(n);

  // Delta_g grows at least linearly, so bisect for the last admissible k before tabulating.
  auto admissible = [&](std::size_t k) { return delta_g(static_cast<double>(k), error, t_step) <= bound; };
  std::size_t lo = 0, hi = k_last;
  if (k_last >= 1 && admissible(k_last)) {
    lo = k_last;
  } else {
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (admissible(mid) ? lo : hi) = mid;
    }
  }
  if (lo == 0)
    throw Error("k_grid: no admissible cut-off for n = " + std::to_string(n) + " under rule " +
                std::string(to_string(rule)));
  const std::vector<double> delta = delta_g_integer(error, t_step, lo);
  std::vector<int> out;
  for (std::size_t k = 1; k <= lo; ++k)
    if (delta[k] <= bound)
      out.push_back(static_cast<int>(k));
  if (out.empty())
    throw Error("k_grid: empty admissible set");
  return out;
}

double sigma_y_hat(std::span<const double> sample)
{
  if (sample.empty())
    throw DomainError("sigma_y_hat: empty sample");
  double acc = 0.0;
  for (double v : sample)
    acc += v;
  return acc / static_cast<double>(sample.size());
}

Selector::Selector(const ErrorModel& error, std::size_t n, const PenaltyConfig& pcfg, const EstimatorConfig& ecfg)
  : n_(n), step_(ecfg.t_step), per_unit_(steps_per_unit(ecfg.t_step)), half_count_(0), chi_(0.0)
{
  pcfg.validate();
  ecfg.validate();
  chi_ = pcfg.effective_chi();
  grid_ = k_grid(n, error, step_, pcfg.rule, ecfg.k_max);
  const auto k_last = static_cast<std::size_t>(grid_.back());
  half_count_ = k_last * per_unit_;
  delta_ = delta_g_integer(error, step_, k_last);
  const std::vector<cplx> w = inverse_weights(error, step_, half_count_);
  weight2_.resize(w.size());
  for (std::size_t m = 0; m < w.size(); ++m)
    weight2_[m] = std::norm(w[m]);
}

std::vector<double> Selector::norms(const EmpiricalMellin& mhat) const
{
  if (mhat.half_count() < half_count_ || std::abs(mhat.step() - step_) > 1e-15 * step_)
    throw DomainError("Selector: empirical transform does not cover the candidate grid");
  const auto k_last = static_cast<std::size_t>(grid_.back());
  std::vector<double> out(k_last + 1, 0.0);
  const auto& v = mhat.half_values();
  const double f0 = std::norm(v[0]) * weight2_[0];
  double running = 0.0;
  for (std::size_t m = 0; m <= half_count_; ++m) {
    const double f = std::norm(v[m]) * weight2_[m];
    running += step_ * f;
    if (m > 0 && m % per_unit_ == 0)
      out[m / per_unit_] = 2.0 * (running - 0.5 * step_ * (f0 + f)) / kTwoPi;
  }
  return out;
}

SelectionResult Selector::select(const EmpiricalMellin& mhat, double sigma_y) const
{
  if (mhat.sample_size() != n_)
    throw DomainError("Selector: sample size differs from the one the grid was built for");
  const std::vector<double> norm2 = norms(mhat);
  SelectionResult res;
  res.sigma_y_hat = sigma_y;
  res.contrast.reserve(grid_.size());
  double best = 0.0;
  for (int k : grid_) {
    ContrastTerm term;
    term.k = k;
    term.neg_norm2 = -norm2[static_cast<std::size_t>(k)];
    term.penalty = 2.0 * chi_ * sigma_y * delta_[static_cast<std::size_t>(k)] / static_cast<double>(n_);
    term.total = term.neg_norm2 + term.penalty;
    if (res.contrast.empty() || term.total < best) {
      best = term.total;
      res.k_hat = k;
    }
    res.contrast.push_back(term);
  }
  return res;
}

SelectionResult select_k(std::span<const double> sample, const ErrorModel& error, const PenaltyConfig& pcfg,
                         const EstimatorConfig& ecfg)
{
  check_sample(sample);
  const Selector selector(error, sample.size(), pcfg, ecfg);
  const EmpiricalMellin mhat(sample, selector.step(), selector.half_count());
  return selector.select(mhat, sigma_y_hat(sample));
}

} // namespace mellinsurv
