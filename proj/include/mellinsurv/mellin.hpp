#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mellinsurv {

using cplx = std::complex<double>;

/// Principal branch of log Gamma(z) (Lanczos, g = 7, reflection for Re z < 1/2).
/// Throws DomainError at the poles z = 0, -1, -2, ...
cplx complex_log_gamma(cplx z);

/// Gamma(z) = exp(complex_log_gamma(z)).
cplx complex_gamma(cplx z);

/// Symmetric uniform grid t_j = (j - M) h, j = 0..2M, on [-k, k] with k = M h.
class TGrid
{
public:
  /// Requires k > 0, h > 0 and k / h integral (to 1e-9 relative).
  TGrid(double half_width, double step);

  /// Grid on [-k, k] whose step is the largest value <= max_step dividing k.
  static TGrid covering(double half_width, double max_step);

  double half_width() const noexcept { return half_count_ * step_; }
  double step() const noexcept { return step_; }
  /// M: number of strictly positive nodes.
  std::size_t half_count() const noexcept { return half_count_; }
  std::size_t size() const noexcept { return 2 * half_count_ + 1; }

  double node(std::size_t j) const noexcept
  {
    return (static_cast<double>(j) - static_cast<double>(half_count_)) * step_;
  }
  /// Trapezoid weight of node j.
  double weight(std::size_t j) const noexcept
  {
    return (j == 0 || j + 1 == size()) ? 0.5 * step_ : step_;
  }

private:
  double step_;
  std::size_t half_count_;
};

/// Values of a Mellin-domain function on a TGrid, developed at `c`.
struct MellinSeries
{
  TGrid grid;
  std::vector<cplx> values;
  double c = 0.5;

  MellinSeries(TGrid g, std::vector<cplx> v, double dev_point);

  /// Tabulates `fn` on every node of `g`.
  static MellinSeries tabulate(const TGrid& g, double dev_point, const std::function<cplx(double)>& fn);

  /// max_j |v(-t_j) - conj(v(t_j))| / max_j |v(t_j)|; 0 for the zero series.
  double hermitian_defect() const;
};

enum class Spacing
{
  linear, ///< uniform in x
  log     ///< uniform in log x
};

/// x-space trapezoid rule on [x_min, x_max] with n_x nodes.
struct QuadratureConfig
{
  double x_min = 1e-8;
  double x_max = 100.0;
  std::size_t n_x = 20001;
  Spacing spacing = Spacing::log;

  void validate() const;
  /// Nodes and trapezoid weights with respect to dx.
  void nodes(std::vector<double>& x, std::vector<double>& w) const;
};

/// Trapezoid approximation of M_c[h](t) = int_0^inf x^{c-1+it} h(x) dx.
cplx mellin_numeric(const std::function<double(double)>& h, double c, double t, const QuadratureConfig& q);

/// Same integral for several t at once (shares the x-evaluations of h).
std::vector<cplx> mellin_numeric(const std::function<double(double)>& h,
                                 double c,
                                 std::span<const double> ts,
                                 const QuadratureConfig& q);

/// Full complex trapezoid value of (2 pi)^{-1} int_{-k}^{k} x^{-c-it} H(t) dt.
cplx mellin_inverse_complex(const MellinSeries& series, double x);

/// Real part of mellin_inverse_complex. Throws DomainError for x <= 0; with
/// debug checks enabled also throws HermitianViolation when the imaginary part
/// exceeds 1e-8 relative to the scale of the series.
double mellin_inverse_at(const MellinSeries& series, double x);

/// mellin_inverse_at over many abscissae.
std::vector<double> mellin_inverse(const MellinSeries& series, std::span<const double> xs);

/// (2 pi)^{-1} int_{-k}^{k} |H(t)|^2 dt.
double plancherel_norm2(const MellinSeries& series);

/// (h1 * h2)(y) = int_0^inf h1(y/x) h2(x) x^{-1} dx by trapezoid over q.
double mult_convolve_numeric(const std::function<double(double)>& h1,
                             const std::function<double(double)>& h2,
                             double y,
                             const QuadratureConfig& q);

/// True when the library was built with the imaginary-residual assertions.
bool debug_checks_enabled() noexcept;

/// Relative imaginary residual threshold used by the debug assertions.
inline constexpr double kImaginaryTolerance = 1e-8;

} // namespace mellinsurv
