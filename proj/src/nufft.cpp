#include "nufft.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace mellinsurv::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSpread = 12; // Gaussian half-width in fine-grid cells
constexpr std::size_t kAnchor = 64;

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex()
{
  static std::mutex m;
  return m;
}

struct FftwFree
{
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

std::size_t smooth_size_at_least(std::size_t n)
{
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u})
      while (r % p == 0)
        r /= p;
    if (r == 1)
      return m;
  }
}

} // namespace

std::vector<std::complex<double>> direct_type1(std::span<const double> theta,
                                               std::span<const double> amplitude,
                                               std::size_t count)
{
  const std::size_t n = theta.size();
  std::vector<double> z_re(n), z_im(n), r_re(n), r_im(n);
  for (std::size_t j = 0; j < n; ++j) {
    z_re[j] = amplitude[j];
    z_im[j] = 0.0;
    r_re[j] = std::cos(theta[j]);
    r_im[j] = std::sin(theta[j]);
  }
  std::vector<std::complex<double>> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    if (m > 0 && m % kAnchor == 0) {
      for (std::size_t j = 0; j < n; ++j) {
        const double phase = std::fmod(static_cast<double>(m) * theta[j], kTwoPi);
        z_re[j] = amplitude[j] * std::cos(phase);
        z_im[j] = amplitude[j] * std::sin(phase);
      }
    }
    double s_re = 0.0, s_im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s_re += z_re[j];
      s_im += z_im[j];
      const double a = z_re[j] * r_re[j] - z_im[j] * r_im[j];
      const double b = z_re[j] * r_im[j] + z_im[j] * r_re[j];
      z_re[j] = a;
      z_im[j] = b;
    }
    out[m] = {s_re, s_im};
  }
  return out;
}

std::vector<std::complex<double>> nufft_type1(std::span<const double> theta,
                                              std::span<const double> amplitude,
                                              std::size_t count)
{
  if (count == 0)
    return {};
  const std::size_t n_modes = count;
  const auto shift = static_cast<std::ptrdiff_t>(n_modes / 2); // modes m' = m - shift
  const std::size_t fine = smooth_size_at_least(std::max<std::size_t>(2 * n_modes, 2 * kSpread + 2));
  const double ratio = static_cast<double>(fine) / static_cast<double>(n_modes);
  const double nm = static_cast<double>(n_modes);
  const double tau = std::numbers::pi * kSpread / (nm * nm * ratio * (ratio - 0.5));
  const double cell = kTwoPi / static_cast<double>(fine);

  std::unique_ptr<fftw_complex[], FftwFree> grid(fftw_alloc_complex(fine));
  for (std::size_t l = 0; l < fine; ++l)
    grid[l][0] = grid[l][1] = 0.0;

  for (std::size_t j = 0; j < theta.size(); ++j) {
    double th = std::fmod(theta[j], kTwoPi);
    if (th < 0.0)
      th += kTwoPi;
    // a_j e^{i shift theta_j} absorbs the mode shift
    const double ph = std::fmod(static_cast<double>(shift) * th, kTwoPi);
    const double a_re = amplitude[j] * std::cos(ph);
    const double a_im = amplitude[j] * std::sin(ph);
    const auto nearest = static_cast<std::ptrdiff_t>(std::floor(th / cell));
    for (std::ptrdiff_t l = nearest - kSpread + 1; l <= nearest + kSpread; ++l) {
      const double d = th - cell * static_cast<double>(l);
      const double g = std::exp(-d * d / (4.0 * tau));
      const auto idx = static_cast<std::size_t>((l % static_cast<std::ptrdiff_t>(fine) + fine) % fine);
      grid[idx][0] += g * a_re;
      grid[idx][1] += g * a_im;
    }
  }

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(fine), grid.get(), grid.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double scale = std::sqrt(std::numbers::pi / tau) / static_cast<double>(fine);
  std::vector<std::complex<double>> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    const std::ptrdiff_t mp = static_cast<std::ptrdiff_t>(m) - shift;
    const auto idx = static_cast<std::size_t>((mp + static_cast<std::ptrdiff_t>(fine)) %
                                              static_cast<std::ptrdiff_t>(fine));
    const double deconv = scale * std::exp(tau * static_cast<double>(mp) * static_cast<double>(mp));
    out[m] = {grid[idx][0] * deconv, grid[idx][1] * deconv};
  }
  return out;
}

} // namespace mellinsurv::detail
