#pragma once

#include "mellinsurv/adaptive.hpp"
#include "mellinsurv/dependence.hpp"
#include "mellinsurv/estimator.hpp"
#include "mellinsurv/models.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mellinsurv {

enum class Dependence
{
  iid,
  ar1_gamma
};

enum class KMode
{
  adaptive,   ///< penalised-contrast selection
  fixed,      ///< a user-supplied cut-off
  oracle_grid ///< best fixed cut-off in hindsight (raw estimator, Mellin-side ISE)
};

std::string_view to_string(Dependence d) noexcept;
std::string_view to_string(KMode k) noexcept;

/// A Monte Carlo run. With dependence == ar1_gamma the target is the
/// stationary marginal Gamma(m, lambda) and `target` is ignored.
struct ExperimentSpec
{
  std::string target = "gamma_4_05";
  std::string error = "unif_0_1";
  Dependence dependence = Dependence::iid;
  Ar1GammaConfig ar1;
  std::size_t n = 500;
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  EstimatorConfig estimator; ///< x.x_max == 0 selects the target's x_max_eff
  PenaltyConfig penalty;
  Variant variant = Variant::clipped;
  KMode k_mode = KMode::adaptive;
  double k_fixed = 0.0;
  unsigned threads = 0; ///< 0: all hardware threads
  bool progress = false; ///< per-replication counter on stderr

  void validate() const;
  /// Key of the target model actually sampled.
  std::string target_key() const;
};

struct MiseResult
{
  double mean_ise = 0.0;
  double se = 0.0;
  std::vector<double> ise;      ///< per included replication, in replication order
  std::vector<double> k_hat;    ///< cut-off used per included replication
  double mean_k_hat = 0.0;
  std::size_t excluded = 0;
  std::vector<std::string> failures; ///< "replication r: message"
  double runtime_seconds = 0.0;
};

struct RateFit
{
  std::vector<double> n;
  std::vector<double> mise;
  double slope = 0.0;
  double intercept = 0.0;
  double reference_slope = 0.0; ///< -2s / (2s + 2 gamma - 1)
  double s = 0.0;
  double gamma = 0.0;
};

/// int (S_hat - S)^2 dx by trapezoid over the estimate's x-grid, which must
/// reach the target's x_max_eff.
double ise(const SurvivalEstimate& est, const TargetModel& truth);

/// ||S_k - S||^2 on (0, inf) for a raw estimate, via Plancherel.
double ise_mellin(const SurvivalEstimate& raw, const TargetModel& truth);

/// Fraction of replications that may fail before a run is aborted.
inline constexpr double kMaxExcludedFraction = 0.05;

/// Replication r draws from derive_seed(spec.seed, r); results are reduced in
/// replication order, so the outcome does not depend on spec.threads.
MiseResult run_experiment(const ExperimentSpec& spec);

struct OracleGridResult
{
  std::vector<int> k;
  std::vector<double> mean_ise;    ///< per k, raw estimator, Mellin-side ISE
  double adaptive_mean_ise = 0.0;  ///< same risk for the selected k_hat
  double mean_k_hat = 0.0;
  int best_k = 0;
  double best_mean_ise = 0.0;
};

/// Risk of every admissible fixed cut-off and of the adaptive choice on the same replications.
OracleGridResult run_oracle_grid(const ExperimentSpec& spec);

/// Least-squares slope of log MISE against log n. Needs >= 3 distinct n.
RateFit rate_fit(const std::vector<std::pair<std::size_t, MiseResult>>& results, double s, double gamma);
RateFit rate_fit(const std::vector<double>& n, const std::vector<double>& mise, double s, double gamma);

/// The cells of simulation table 1 (4 targets x n in {500, 1000, 2000}, error
/// unif_0_1) or table 2 (AR(1)-Gamma, m in {1, 4}, rho in {0.1, 0.5, 0.9},
/// lambda = 1). Cell i gets seed derive_seed(base.seed, 1000 + i).
std::vector<ExperimentSpec> table_specs(int which, const ExperimentSpec& base);

} // namespace mellinsurv
