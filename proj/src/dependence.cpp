#include "mellinsurv/dependence.hpp"

#include "mellinsurv/errors.hpp"

#include <cmath>

namespace mellinsurv {

void Ar1GammaConfig::validate() const
{
  if (m < 1)
    throw ConfigError("ar1_gamma: m must be at least 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError("ar1_gamma: lambda must be positive");
  if (!(std::abs(rho) < 1.0))
    throw ConfigError("ar1_gamma: need |rho| < 1");
}

std::vector<double> sample_ar1_gamma(std::size_t n, const Ar1GammaConfig& cfg, Rng& rng)
{
  cfg.validate();
  if (cfg.rho < 0.0)
    throw ConfigError("ar1_gamma: binomial thinning needs rho >= 0");
  std::vector<double> out(n);
  double x = gamma_variate(rng, cfg.m, cfg.lambda);
  for (auto& v : out) {
    const int b = binomial_variate(rng, cfg.m, 1.0 - cfg.rho);
    const double eps = b == 0 ? 0.0 : gamma_variate(rng, b, cfg.lambda);
    x = cfg.rho * x + eps;
    v = x;
  }
  return out;
}

double innovation_norm(const Ar1GammaConfig& cfg, int p)
{
  cfg.validate();
  const double mean_b = cfg.m * (1.0 - cfg.rho);
  if (p == 1)
    return mean_b / cfg.lambda;
  if (p == 2) {
    // E[eps^2] = E[B (B + 1)] / lambda^2, B ~ Bin(m, 1 - rho)
    const double var_b = cfg.m * cfg.rho * (1.0 - cfg.rho);
    return std::sqrt(var_b + mean_b * mean_b + mean_b) / cfg.lambda;
  }
  throw DomainError("innovation_norm: p must be 1 or 2");
}

double fdm_bound(int k, const Ar1GammaConfig& cfg, int p)
{
  if (k < 0)
    throw DomainError("fdm_bound: k must be non-negative");
  return 2.0 * std::pow(std::abs(cfg.rho), k) * innovation_norm(cfg, p);
}

FdmSums fdm_sums(const Ar1GammaConfig& cfg)
{
  cfg.validate();
  const double r = std::abs(cfg.rho);
  FdmSums s;
  s.geometric_delta2 = 1.0 / (1.0 - r);
  s.geometric_delta1_sqrt = 1.0 / (1.0 - std::sqrt(r));
  s.sum_delta2 = 2.0 * innovation_norm(cfg, 2) * s.geometric_delta2;
  s.sum_delta1_sqrt = std::sqrt(2.0 * innovation_norm(cfg, 1)) * s.geometric_delta1_sqrt;
  return s;
}

double holder_constant(double t) noexcept
{
  return 1.0 + 4.0 * std::sqrt(std::abs(t));
}

double autocorrelation(const std::vector<double>& x, std::size_t lag)
{
  const std::size_t n = x.size();
  if (n <= lag + 1)
    throw DomainError("autocorrelation: series too short");
  double mean = 0.0;
  for (double v : x)
    mean += v;
  mean /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean;
    den += d * d;
    if (i + lag < n)
      num += d * (x[i + lag] - mean);
  }
  return num / den;
}

} // namespace mellinsurv
