#pragma once

#include "mellinsurv/mellin.hpp"
#include "mellinsurv/models.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mellinsurv {

/// Uniform evaluation grid in x.
struct XGrid
{
  double x_min = 1e-3;
  double x_max = 0.0; ///< 0 selects 2 * max(sample) when an estimate is built
  std::size_t n_x = 2000;

  void validate() const;
  std::vector<double> nodes() const;
};

struct EstimatorConfig
{
  double t_step = 1.0 / 128.0;
  XGrid x;
  double k_max = 0.0; ///< cap on the cut-off; 0: none for an explicit k, n for the adaptive grid

  void validate() const;
};

enum class Variant
{
  raw,
  clipped,
  heuristic
};

std::string_view to_string(Variant v) noexcept;
Variant variant_from_string(std::string_view s);

/// A survival estimate on an x-grid together with its Mellin coefficients.
struct SurvivalEstimate
{
  double k = 0.0;
  /// t -> Mhat(t) / ((1/2 + it) M_{3/2}[g](t)) on [-k, k], developed at c = 1/2.
  MellinSeries coeffs;
  std::vector<double> x;
  std::vector<double> values;
  Variant variant = Variant::raw;
};

/// n^{-1} sum_j Y_j^{1/2 + it}.
cplx empirical_mellin(std::span<const double> sample, double t);

enum class MellinMethod
{
  automatic, ///< direct for small problems, nufft otherwise
  direct,    ///< rotation recurrence per observation
  nufft      ///< Gaussian-gridding non-uniform FFT
};

/// Empirical Mellin transform on the half grid t_m = m h, m = 0..M. The
/// negative half follows from Hermitian symmetry.
class EmpiricalMellin
{
public:
  EmpiricalMellin(std::span<const double> sample,
                  double step,
                  std::size_t half_count,
                  MellinMethod method = MellinMethod::automatic);

  double step() const noexcept { return step_; }
  std::size_t half_count() const noexcept { return values_.size() - 1; }
  std::size_t sample_size() const noexcept { return n_; }
  double max_observation() const noexcept { return max_obs_; }
  MellinMethod method() const noexcept { return method_; }
  /// Mhat(m h) for 0 <= m <= M.
  const std::vector<cplx>& half_values() const noexcept { return values_; }
  /// Mhat(m h) for -M <= m <= M.
  cplx at(std::ptrdiff_t m) const;

private:
  double step_;
  std::size_t n_;
  double max_obs_;
  MellinMethod method_;
  std::vector<cplx> values_;
};

/// Validates a sample (non-empty, all entries positive and finite).
void check_sample(std::span<const double> sample);

/// 1 / ((1/2 + i m h) M_{3/2}[g](m h)) for m = 0..M; with `with_survival_factor`
/// false the (1/2 + it) factor is dropped. Throws G0Violation when |M_g| < 1e-14.
std::vector<cplx> inverse_weights(const ErrorModel& error, double step, std::size_t half_count,
                                  bool with_survival_factor = true);

/// Delta_g(k) = (2 pi)^{-1} int_{-k}^{k} |(1/2 + it) M_{3/2}[g](t)|^{-2} dt (trapezoid).
double delta_g(double k, const ErrorModel& error, double t_step);

/// Delta_g(k) for k = 0, 1, ..., k_last (integer cut-offs; step must divide 1).
std::vector<double> delta_g_integer(const ErrorModel& error, double t_step, std::size_t k_last);

/// Raw spectral cut-off estimate at cut-off k.
SurvivalEstimate spectral_cutoff(std::span<const double> sample, const ErrorModel& error, double k,
                                 const EstimatorConfig& cfg);

/// Same, reusing an empirical transform whose grid contains [-k, k] (k a multiple of its step).
SurvivalEstimate spectral_cutoff(const EmpiricalMellin& mhat, const ErrorModel& error, double k,
                                 const EstimatorConfig& cfg);

/// ||S_k||^2 computed on the Mellin side (Plancherel) from the coefficients.
double estimate_norm2(const SurvivalEstimate& est);

/// Node-wise clamp of the values to [0, 1].
SurvivalEstimate clip(SurvivalEstimate est);

/// Monotone estimate S~(x) / S~(x_min), S~(x) = int_x^{x_max} (p_k(y))_+ y^{-1} dy.
/// Throws DegenerateEstimate when S~(x_min) == 0.
SurvivalEstimate heuristic_survival(std::span<const double> sample, const ErrorModel& error, double k,
                                    const EstimatorConfig& cfg);
SurvivalEstimate heuristic_survival(const EmpiricalMellin& mhat, const ErrorModel& error, double k,
                                    const EstimatorConfig& cfg);

/// Fraction of observations strictly greater than x.
double empirical_survival(std::span<const double> sample, double x);

/// Evaluates (2 pi)^{-1} int x^{-1/2-it} H(t) dt on many x for a Hermitian series.
std::vector<double> hermitian_inverse(const MellinSeries& series, std::span<const double> xs);

} // namespace mellinsurv
