#pragma once

#include "mellinsurv/random.hpp"

#include <cstddef>
#include <vector>

namespace mellinsurv {

/// X_n = rho X_{n-1} + eps_n with eps_n | B_n ~ Gamma(B_n, lambda), B_n ~ Bin(m, 1 - rho).
/// The stationary marginal is Gamma(m, lambda).
struct Ar1GammaConfig
{
  int m = 1;
  double lambda = 1.0;
  double rho = 0.0;

  /// |rho| < 1, m >= 1, lambda > 0. Throws ConfigError.
  void validate() const;
};

/// X_1..X_n started from X_0 ~ Gamma(m, lambda). Requires 0 <= rho < 1.
std::vector<double> sample_ar1_gamma(std::size_t n, const Ar1GammaConfig& cfg, Rng& rng);

/// ||eps_1||_p for p in {1, 2}.
double innovation_norm(const Ar1GammaConfig& cfg, int p);

/// 2 |rho|^k ||eps_1||_p, the bound on the functional dependence measure delta_p(k).
double fdm_bound(int k, const Ar1GammaConfig& cfg, int p);

struct FdmSums
{
  double sum_delta2 = 0.0;       ///< sum_k 2 |rho|^k ||eps||_2
  double sum_delta1_sqrt = 0.0;  ///< sum_k (2 |rho|^k ||eps||_1)^{1/2}
  double geometric_delta2 = 0.0; ///< sum_k |rho|^k = 1 / (1 - |rho|)
  double geometric_delta1_sqrt = 0.0; ///< sum_k |rho|^{k/2} = 1 / (1 - |rho|^{1/2})
};

FdmSums fdm_sums(const Ar1GammaConfig& cfg);

/// Hoelder constant of x -> x^{1/2+it} with exponent 1/2: 1 + 4 |t|^{1/2}.
double holder_constant(double t) noexcept;

/// Lag-`lag` sample autocorrelation.
double autocorrelation(const std::vector<double>& x, std::size_t lag);

} // namespace mellinsurv
