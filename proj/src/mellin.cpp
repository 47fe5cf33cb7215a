#include "mellinsurv/mellin.hpp"

#include "mellinsurv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mellinsurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rotations are re-anchored with an exact std::polar every kAnchor steps.
constexpr std::size_t kAnchor = 64;

struct InverseSum
{
  cplx value;
  double scale; // sum of w |H|, bounds |value|
};

// sum_j w_j e^{-i t_j log x} H_j over a symmetric grid.
InverseSum inverse_sum(const TGrid& grid, const std::vector<cplx>& values, double log_x)
{
  const std::size_t m_half = grid.half_count();
  const double h = grid.step();
  const cplx* centre = values.data() + m_half;

  cplx acc = grid.weight(m_half) * centre[0];
  double scale = grid.weight(m_half) * std::abs(centre[0]);
  const cplx rot = std::polar(1.0, -h * log_x);
  cplx z = 1.0;
  for (std::size_t m = 1; m <= m_half; ++m) {
    if (m % kAnchor == 0)
      z = std::polar(1.0, -static_cast<double>(m) * h * log_x);
    else
      z *= rot;
    const double w = grid.weight(m_half + m);
    const cplx pos = centre[m];
    const cplx neg = centre[-static_cast<std::ptrdiff_t>(m)];
    acc += w * (z * pos + std::conj(z) * neg);
    scale += w * (std::abs(pos) + std::abs(neg));
  }
  return {acc, scale};
}

} // namespace

bool debug_checks_enabled() noexcept
{
#ifdef MELLINSURV_DEBUG_CHECKS
  return true;
#else
  return false;
#endif
}

// ---------------------------------------------------------------------------
// TGrid

TGrid::TGrid(double half_width, double step)
  : step_(step), half_count_(0)
{
  if (!(half_width > 0.0) || !(step > 0.0) || !std::isfinite(half_width))
    throw DomainError("TGrid: need k > 0 and h > 0");
  const double ratio = half_width / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw DomainError("TGrid: k / h must be a positive integer (k = " + std::to_string(half_width) +
                      ", h = " + std::to_string(step) + ")");
  half_count_ = static_cast<std::size_t>(rounded);
}

TGrid TGrid::covering(double half_width, double max_step)
{
  if (!(half_width > 0.0) || !(max_step > 0.0))
    throw DomainError("TGrid::covering: need k > 0 and h > 0");
  const double count = std::max(1.0, std::ceil(half_width / max_step - 1e-9));
  return TGrid(half_width, half_width / count);
}

// ---------------------------------------------------------------------------
// MellinSeries

MellinSeries::MellinSeries(TGrid g, std::vector<cplx> v, double dev_point)
  : grid(g), values(std::move(v)), c(dev_point)
{
  if (values.size() != grid.size())
    throw DomainError("MellinSeries: value count does not match the grid");
}

MellinSeries MellinSeries::tabulate(const TGrid& g, double dev_point, const std::function<cplx(double)>& fn)
{
  std::vector<cplx> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    v[j] = fn(g.node(j));
  return MellinSeries(g, std::move(v), dev_point);
}

double MellinSeries::hermitian_defect() const
{
  double peak = 0.0;
  double defect = 0.0;
  const std::size_t n = values.size();
  for (std::size_t j = 0; j < n; ++j) {
    peak = std::max(peak, std::abs(values[j]));
    defect = std::max(defect, std::abs(values[n - 1 - j] - std::conj(values[j])));
  }
  return peak > 0.0 ? defect / peak : 0.0;
}

// ---------------------------------------------------------------------------
// x-space quadrature

void QuadratureConfig::validate() const
{
  if (!(x_min > 0.0) || !(x_max > x_min) || n_x < 2)
    throw DomainError("QuadratureConfig: need 0 < x_min < x_max and n_x >= 2");
}

void QuadratureConfig::nodes(std::vector<double>& x, std::vector<double>& w) const
{
  validate();
  x.resize(n_x);
  w.resize(n_x);
  const double last = static_cast<double>(n_x - 1);
  if (spacing == Spacing::linear) {
    const double h = (x_max - x_min) / last;
    for (std::size_t i = 0; i < n_x; ++i) {
      x[i] = x_min + h * static_cast<double>(i);
      w[i] = h;
    }
    x.back() = x_max;
  } else {
    const double u0 = std::log(x_min);
    const double h = (std::log(x_max) - u0) / last;
    for (std::size_t i = 0; i < n_x; ++i) {
      x[i] = std::exp(u0 + h * static_cast<double>(i));
      w[i] = h * x[i]; // dx = x du
    }
    x.front() = x_min;
    x.back() = x_max;
    w.front() = h * x_min;
    w.back() = h * x_max;
  }
  w.front() *= 0.5;
  w.back() *= 0.5;
}

std::vector<cplx> mellin_numeric(const std::function<double(double)>& h,
                                 double c,
                                 std::span<const double> ts,
                                 const QuadratureConfig& q)
{
  std::vector<double> x, w;
  q.nodes(x, w);
  std::vector<double> base(x.size());
  std::vector<double> logs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    logs[i] = std::log(x[i]);
    base[i] = w[i] * std::pow(x[i], c - 1.0) * h(x[i]);
  }
  std::vector<cplx> out(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (base[i] == 0.0)
        continue;
      const double phase = ts[k] * logs[i];
      re += base[i] * std::cos(phase);
      im += base[i] * std::sin(phase);
    }
    out[k] = {re, im};
  }
  return out;
}

cplx mellin_numeric(const std::function<double(double)>& h, double c, double t, const QuadratureConfig& q)
{
  return mellin_numeric(h, c, std::span<const double>(&t, 1), q).front();
}

double mult_convolve_numeric(const std::function<double(double)>& h1,
                             const std::function<double(double)>& h2,
                             double y,
                             const QuadratureConfig& q)
{
  if (!(y > 0.0))
    throw DomainError("mult_convolve_numeric: y must be positive");
  std::vector<double> x, w;
  q.nodes(x, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double b = h2(x[i]);
    if (b != 0.0)
      acc += w[i] * h1(y / x[i]) * b / x[i];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Mellin-domain inversion and norms

cplx mellin_inverse_complex(const MellinSeries& series, double x)
{
  if (!(x > 0.0))
    throw DomainError("mellin_inverse_at: x must be positive");
  const InverseSum s = inverse_sum(series.grid, series.values, std::log(x));
  return s.value * std::pow(x, -series.c) / kTwoPi;
}

double mellin_inverse_at(const MellinSeries& series, double x)
{
  if (!(x > 0.0))
    throw DomainError("mellin_inverse_at: x must be positive");
  const InverseSum s = inverse_sum(series.grid, series.values, std::log(x));
#ifdef MELLINSURV_DEBUG_CHECKS
  if (std::abs(s.value.imag()) > kImaginaryTolerance * s.scale)
    throw HermitianViolation("mellin_inverse_at: imaginary residual " + std::to_string(s.value.imag()) +
                             " exceeds tolerance; series is not Hermitian");
#endif
  return s.value.real() * std::pow(x, -series.c) / kTwoPi;
}

std::vector<double> mellin_inverse(const MellinSeries& series, std::span<const double> xs)
{
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = mellin_inverse_at(series, xs[i]);
  return out;
}

double plancherel_norm2(const MellinSeries& series)
{
  double acc = 0.0;
  for (std::size_t j = 0; j < series.values.size(); ++j)
    acc += series.grid.weight(j) * std::norm(series.values[j]);
  return acc / kTwoPi;
}

} // namespace mellinsurv
