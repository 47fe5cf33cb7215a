#include "mellinsurv/estimator.hpp"

#include "mellinsurv/errors.hpp"
#include "nufft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mellinsurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kG0Floor = 1e-14;
constexpr std::size_t kAnchor = 64;
// Above this many (observation, node) pairs the NUFFT route is used.
constexpr double kDirectBudget = 4.0e6;

bool is_multiple(double k, double step)
{
  const double r = k / step;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

XGrid resolve(const XGrid& x, double max_obs)
{
  XGrid out = x;
  if (out.x_max == 0.0)
    out.x_max = 2.0 * max_obs;
  out.validate();
  return out;
}

MellinSeries build_series(const EmpiricalMellin& mhat, const ErrorModel& error, double k, bool survival)
{
  if (!(k > 0.0))
    throw DomainError("cut-off k must be positive");
  if (!is_multiple(k, mhat.step()))
    throw DomainError("cut-off k = " + std::to_string(k) + " is not a multiple of the t-step");
  const TGrid grid(k, mhat.step());
  const std::size_t half = grid.half_count();
  if (half > mhat.half_count())
    throw DomainError("cut-off k exceeds the range of the empirical Mellin transform");
  const std::vector<cplx> w = inverse_weights(error, mhat.step(), half, survival);
  std::vector<cplx> v(grid.size());
  for (std::size_t m = 0; m <= half; ++m) {
    const cplx c = mhat.half_values()[m] * w[m];
    v[half + m] = c;
    v[half - m] = std::conj(c);
  }
  return MellinSeries(grid, std::move(v), 0.5);
}

} // namespace

// ---------------------------------------------------------------------------
// configuration

void XGrid::validate() const
{
  if (!(x_min > 0.0) || !(x_max > x_min) || n_x < 2)
    throw ConfigError("x-grid: need 0 < x_min < x_max and n_x >= 2");
}

std::vector<double> XGrid::nodes() const
{
  validate();
  std::vector<double> out(n_x);
  const double h = (x_max - x_min) / static_cast<double>(n_x - 1);
  for (std::size_t i = 0; i < n_x; ++i)
    out[i] = x_min + h * static_cast<double>(i);
  out.back() = x_max;
  return out;
}

void EstimatorConfig::validate() const
{
  if (!(t_step > 0.0))
    throw ConfigError("t_step must be positive");
  if (!(x.x_min > 0.0) || x.n_x < 2 || (x.x_max != 0.0 && !(x.x_max > x.x_min)))
    throw ConfigError("x-grid: need 0 < x_min < x_max and n_x >= 2");
  if (k_max < 0.0)
    throw ConfigError("k_max must be non-negative");
}

std::string_view to_string(Variant v) noexcept
{
  switch (v) {
    case Variant::raw: return "raw";
    case Variant::clipped: return "clipped";
    case Variant::heuristic: return "heuristic";
  }
  return "raw";
}

Variant variant_from_string(std::string_view s)
{
  if (s == "raw")
    return Variant::raw;
  if (s == "clipped")
    return Variant::clipped;
  if (s == "heuristic")
    return Variant::heuristic;
  throw ConfigError("unknown variant '" + std::string(s) + "' (raw|clipped|heuristic)");
}

// ---------------------------------------------------------------------------
// empirical Mellin transform

void check_sample(std::span<const double> sample)
{
  if (sample.empty())
    throw DomainError("empty sample");
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (!(sample[i] > 0.0) || !std::isfinite(sample[i]))
      throw DomainError("sample entry " + std::to_string(i) + " is not a positive finite number");
}

cplx empirical_mellin(std::span<const double> sample, double t)
{
  check_sample(sample);
  double re = 0.0, im = 0.0;
  for (double y : sample) {
    const double r = std::sqrt(y);
    const double phase = t * std::log(y);
    re += r * std::cos(phase);
    im += r * std::sin(phase);
  }
  const double n = static_cast<double>(sample.size());
  return {re / n, im / n};
}

EmpiricalMellin::EmpiricalMellin(std::span<const double> sample, double step, std::size_t half_count,
                                 MellinMethod method)
  : step_(step), n_(sample.size()), max_obs_(0.0), method_(method)
{
  check_sample(sample);
  if (!(step > 0.0))
    throw DomainError("EmpiricalMellin: step must be positive");
  std::vector<double> theta(n_), amp(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    theta[j] = step * std::log(sample[j]);
    amp[j] = std::sqrt(sample[j]);
    max_obs_ = std::max(max_obs_, sample[j]);
  }
  if (method_ == MellinMethod::automatic)
    method_ = static_cast<double>(n_) * static_cast<double>(half_count + 1) <= kDirectBudget ? MellinMethod::direct
                                                                                              : MellinMethod::nufft;
  values_ = method_ == MellinMethod::direct ? detail::direct_type1(theta, amp, half_count + 1)
                                            : detail::nufft_type1(theta, amp, half_count + 1);
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (auto& v : values_)
    v *= inv_n;
  values_.front() = {values_.front().real(), 0.0};
}

cplx EmpiricalMellin::at(std::ptrdiff_t m) const
{
  const auto a = static_cast<std::size_t>(m < 0 ? -m : m);
  if (a >= values_.size())
    throw DomainError("EmpiricalMellin::at: node outside the tabulated range");
  return m < 0 ? std::conj(values_[a]) : values_[a];
}

// ---------------------------------------------------------------------------
// variance weight

std::vector<cplx> inverse_weights(const ErrorModel& error, double step, std::size_t half_count,
                                  bool with_survival_factor)
{
  std::vector<cplx> w(half_count + 1);
  for (std::size_t m = 0; m <= half_count; ++m) {
    const double t = static_cast<double>(m) * step;
    const cplx mg = error.mellin_g_32(t);
    if (!(std::abs(mg) >= kG0Floor))
      throw G0Violation(t, std::abs(mg));
    w[m] = with_survival_factor ? 1.0 / (cplx(0.5, t) * mg) : 1.0 / mg;
  }
  return w;
}

double delta_g(double k, const ErrorModel& error, double t_step)
{
  if (!(t_step > 0.0))
    throw DomainError("delta_g: t-step must be positive");
  if (!(k > 0.0))
    return 0.0;
  const TGrid grid = TGrid::covering(k, t_step);
  const std::vector<cplx> w = inverse_weights(error, grid.step(), grid.half_count());
  double acc = 0.0;
  for (std::size_t m = 0; m <= grid.half_count(); ++m) {
    const double weight = grid.weight(grid.half_count() + m);
    acc += (m == 0 ? 1.0 : 2.0) * weight * std::norm(w[m]);
  }
  return acc / kTwoPi;
}

std::vector<double> delta_g_integer(const ErrorModel& error, double t_step, std::size_t k_last)
{
  if (!(t_step > 0.0) || !is_multiple(1.0, t_step))
    throw DomainError("delta_g_integer: t-step must divide 1");
  const auto per_unit = static_cast<std::size_t>(std::llround(1.0 / t_step));
  const std::size_t half = k_last * per_unit;
  const std::vector<cplx> w = inverse_weights(error, t_step, half);
  std::vector<double> out(k_last + 1, 0.0);
  // running full-step sum; trapezoid on [0, k] = sum - h/2 (f_0 + f_k)
  double running = 0.0;
  const double f0 = std::norm(w[0]);
  for (std::size_t m = 0; m <= half; ++m) {
    const double f = std::norm(w[m]);
    running += t_step * f;
    if (m % per_unit == 0 && m > 0) {
      const double half_trap = running - 0.5 * t_step * (f0 + f);
      out[m / per_unit] = 2.0 * half_trap / kTwoPi;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// estimators

std::vector<double> hermitian_inverse(const MellinSeries& series, std::span<const double> xs)
{
  if (debug_checks_enabled())
    return mellin_inverse(series, xs);
  const std::size_t nx = xs.size();
  const std::size_t half = series.grid.half_count();
  const double h = series.grid.step();
  const cplx* centre = series.values.data() + half;

  std::vector<double> log_x(nx), z_re(nx), z_im(nx), r_re(nx), r_im(nx), acc(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    if (!(xs[i] > 0.0))
      throw DomainError("mellin inversion: x must be positive");
    log_x[i] = std::log(xs[i]);
    r_re[i] = std::cos(h * log_x[i]);
    r_im[i] = -std::sin(h * log_x[i]);
    z_re[i] = 1.0;
    z_im[i] = 0.0;
    acc[i] = series.grid.weight(half) * centre[0].real();
  }
  for (std::size_t m = 1; m <= half; ++m) {
    if (m % kAnchor == 0) {
      for (std::size_t i = 0; i < nx; ++i) {
        const double phase = -static_cast<double>(m) * h * log_x[i];
        z_re[i] = std::cos(phase);
        z_im[i] = std::sin(phase);
      }
    } else {
      for (std::size_t i = 0; i < nx; ++i) {
        const double a = z_re[i] * r_re[i] - z_im[i] * r_im[i];
        const double b = z_re[i] * r_im[i] + z_im[i] * r_re[i];
        z_re[i] = a;
        z_im[i] = b;
      }
    }
    const double w = 2.0 * series.grid.weight(half + m);
    const double c_re = w * centre[m].real();
    const double c_im = w * centre[m].imag();
    for (std::size_t i = 0; i < nx; ++i)
      acc[i] += z_re[i] * c_re - z_im[i] * c_im;
  }
  for (std::size_t i = 0; i < nx; ++i)
    acc[i] *= std::pow(xs[i], -series.c) / kTwoPi;
  return acc;
}

SurvivalEstimate spectral_cutoff(const EmpiricalMellin& mhat, const ErrorModel& error, double k,
                                 const EstimatorConfig& cfg)
{
  cfg.validate();
  const XGrid xg = resolve(cfg.x, mhat.max_observation());
  MellinSeries coeffs = build_series(mhat, error, k, true);
  std::vector<double> x = xg.nodes();
  std::vector<double> values = hermitian_inverse(coeffs, x);
  return SurvivalEstimate{k, std::move(coeffs), std::move(x), std::move(values), Variant::raw};
}

SurvivalEstimate spectral_cutoff(std::span<const double> sample, const ErrorModel& error, double k,
                                 const EstimatorConfig& cfg)
{
  cfg.validate();
  check_sample(sample);
  if (!(k > 0.0))
    throw DomainError("cut-off k must be positive");
  if (cfg.k_max > 0.0 && k > cfg.k_max * (1.0 + 1e-12))
    throw DomainError("cut-off k = " + std::to_string(k) + " exceeds k_max = " + std::to_string(cfg.k_max));
  const TGrid grid = TGrid::covering(k, cfg.t_step);
  const EmpiricalMellin mhat(sample, grid.step(), grid.half_count());
  return spectral_cutoff(mhat, error, grid.half_width(), cfg);
}

double estimate_norm2(const SurvivalEstimate& est)
{
  return plancherel_norm2(est.coeffs);
}

SurvivalEstimate clip(SurvivalEstimate est)
{
  for (auto& v : est.values)
    v = std::clamp(v, 0.0, 1.0);
  if (est.variant == Variant::raw)
    est.variant = Variant::clipped;
  return est;
}

SurvivalEstimate heuristic_survival(const EmpiricalMellin& mhat, const ErrorModel& error, double k,
                                    const EstimatorConfig& cfg)
{
  cfg.validate();
  const XGrid xg = resolve(cfg.x, mhat.max_observation());
  MellinSeries coeffs = build_series(mhat, error, k, true);
  const MellinSeries density = build_series(mhat, error, k, false);
  std::vector<double> x = xg.nodes();
  const std::vector<double> p = hermitian_inverse(density, x);

  // right-to-left trapezoid of (p)_+ / y, truncated at x_max
  std::vector<double> tail(x.size(), 0.0);
  for (std::size_t i = x.size() - 1; i-- > 0;) {
    const double left = std::max(p[i], 0.0) / x[i];
    const double right = std::max(p[i + 1], 0.0) / x[i + 1];
    tail[i] = tail[i + 1] + 0.5 * (x[i + 1] - x[i]) * (left + right);
  }
  const double norm = tail.front();
  if (!(norm > 0.0))
    throw DegenerateEstimate("heuristic estimate has no positive mass on the x-grid");
  for (auto& v : tail)
    v /= norm;
  tail.front() = 1.0;
  return SurvivalEstimate{k, std::move(coeffs), std::move(x), std::move(tail), Variant::heuristic};
}

SurvivalEstimate heuristic_survival(std::span<const double> sample, const ErrorModel& error, double k,
                                    const EstimatorConfig& cfg)
{
  cfg.validate();
  check_sample(sample);
  if (!(k > 0.0))
    throw DomainError("cut-off k must be positive");
  const TGrid grid = TGrid::covering(k, cfg.t_step);
  const EmpiricalMellin mhat(sample, grid.step(), grid.half_count());
  return heuristic_survival(mhat, error, grid.half_width(), cfg);
}

double empirical_survival(std::span<const double> sample, double x)
{
  if (sample.empty())
    return 0.0;
  const auto above = std::count_if(sample.begin(), sample.end(), [x](double v) { return v > x; });
  return static_cast<double>(above) / static_cast<double>(sample.size());
}

} // namespace mellinsurv
