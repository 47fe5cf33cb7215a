#pragma once

#include "mellinsurv/estimator.hpp"
#include "mellinsurv/models.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mellinsurv {

/// Admissibility rule for the candidate cut-offs.
enum class GridRule
{
  delta_le_n,     ///< {k in 1..n : Delta_g(k) <= n}   (default)
  delta_le_inv_n  ///< {k in 1..n : Delta_g(k) <= 1/n} (literal reading; empty in practice)
};

std::string_view to_string(GridRule r) noexcept;
GridRule grid_rule_from_string(std::string_view s);

/// The value of chi above which the oracle inequality is proven.
inline constexpr double kTheoreticalChi = 96.0;

struct PenaltyConfig
{
  double chi = 2.0;
  bool use_theoretical = false; ///< overrides chi with kTheoreticalChi
  GridRule rule = GridRule::delta_le_n;

  double effective_chi() const noexcept { return use_theoretical ? kTheoreticalChi : chi; }
  void validate() const;
};

struct ContrastTerm
{
  int k = 0;
  double neg_norm2 = 0.0; ///< -||S_k||^2
  double penalty = 0.0;   ///< 2 chi sigma_Y Delta_g(k) / n
  double total = 0.0;
};

struct SelectionResult
{
  int k_hat = 0;
  double sigma_y_hat = 0.0;
  std::vector<ContrastTerm> contrast; ///< one entry per admissible k, ascending
};

/// Admissible integer cut-offs; prefix-closed since Delta_g is non-decreasing.
/// `k_cap` (> 0) further caps the grid. Throws Error when the grid is empty.
std::vector<int> k_grid(std::size_t n, const ErrorModel& error, double t_step,
                        GridRule rule = GridRule::delta_le_n, double k_cap = 0.0);

/// Sample mean of the observations.
double sigma_y_hat(std::span<const double> sample);

/// Penalised-contrast selection precomputed for a fixed (error, n, configs);
/// reusable across samples of that size.
class Selector
{
public:
  Selector(const ErrorModel& error, std::size_t n, const PenaltyConfig& pcfg, const EstimatorConfig& ecfg);

  const std::vector<int>& grid() const noexcept { return grid_; }
  /// Delta_g(k) for k = 0..max(grid).
  const std::vector<double>& delta() const noexcept { return delta_; }
  /// Number of positive t-nodes the empirical transform must cover.
  std::size_t half_count() const noexcept { return half_count_; }
  double step() const noexcept { return step_; }

  SelectionResult select(const EmpiricalMellin& mhat, double sigma_y) const;

  /// (2 pi)^{-1} int_{-k}^{k} |coeff|^2 dt for k = 0..max(grid), from one transform.
  std::vector<double> norms(const EmpiricalMellin& mhat) const;

private:
  std::size_t n_;
  double step_;
  std::size_t per_unit_;
  std::size_t half_count_;
  double chi_;
  std::vector<int> grid_;
  std::vector<double> delta_;
  std::vector<double> weight2_; ///< |1 / ((1/2+it) M_g(t))|^2 on the half grid
};

/// k_hat in argmin { -||S_k||^2 + 2 chi sigma_Y Delta_g(k) / n : k admissible },
/// ties to the smallest k.
SelectionResult select_k(std::span<const double> sample, const ErrorModel& error, const PenaltyConfig& pcfg,
                         const EstimatorConfig& ecfg);

} // namespace mellinsurv
