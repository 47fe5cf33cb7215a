#pragma once

#include "mellinsurv/mellin.hpp"
#include "mellinsurv/random.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mellinsurv {

/// A ground-truth lifetime law X with density f and survival S = P(X > x).
struct TargetModel
{
  std::string name;
  std::function<double(double)> density;
  std::function<double(double)> survival;
  /// M_c[f](t) in closed form, valid on the strip where the family's moment exists.
  std::function<cplx(double, double)> mellin_density;
  /// M_{1/2}[S](t) in closed form.
  std::function<cplx(double)> mellin_survival_12;
  std::function<double(Rng&)> draw;

  double mean = 0.0;      ///< E[X]
  double x_max_eff = 0.0; ///< S(x_max_eff) <= 1e-4 (the 1 - 1e-4 quantile)
  double norm2 = 0.0;     ///< ||S||^2 = int_0^inf S(x)^2 dx
  QuadratureConfig support; ///< effective support for x-space oracle integrals

  cplx mellin_f_32(double t) const { return mellin_density(1.5, t); }
  cplx mellin_S_12(double t) const { return mellin_survival_12(t); }
  std::vector<double> sample(Rng& rng, std::size_t n) const;
};

/// A multiplicative noise law U with density g.
struct ErrorModel
{
  std::string name;
  std::function<double(double)> density; ///< NaN for the point mass
  std::function<cplx(double, double)> mellin_density;
  std::function<double(Rng&)> draw;

  double gamma_exponent = 0.0; ///< polynomial decay exponent of |M_{3/2}[g]|
  double c_lower = 1.0;        ///< c_g: lower bracketing constant
  double c_upper = 1.0;        ///< C_g: upper bracketing constant
  double sigma_u = 1.0;        ///< E[U]
  double xg_sup = 0.0;         ///< sup_u u g(u)
  bool point_mass = false;     ///< U == 1 (no noise)
  QuadratureConfig support;

  cplx mellin_g_32(double t) const { return mellin_density(1.5, t); }
  std::vector<double> sample(Rng& rng, std::size_t n) const;
};

// ---------------------------------------------------------------------------
// Parameterised families. Each throws ConfigError on invalid parameters.

/// Gamma(shape, rate).
TargetModel gamma_target(double shape, double rate = 1.0);
/// Weibull with shape m and unit scale: f(x) = m x^{m-1} exp(-x^m).
TargetModel weibull_target(double m);
/// Log-normal: log X ~ N(mu, lambda^2).
TargetModel lognormal_target(double mu, double lambda);
/// Scaled Log-Gamma: log X - mu ~ Gamma(a, rate lambda); normalised density
/// lambda^a e^{lambda mu} / Gamma(a) x^{-lambda-1} (log x - mu)^{a-1} on (e^mu, inf).
TargetModel scaled_loggamma_target(double mu, double a, double lambda);
/// Beta(1, b) on (0, 1), density b (1 - x)^{b-1}, b a positive integer.
TargetModel beta1_target(int b);
/// scale * Beta(p, q) on (0, scale).
TargetModel scaled_beta_target(double p, double q, double scale);

ErrorModel uniform_error(double lo, double hi);
/// Beta(1, b) noise, b a positive integer (gamma = b).
ErrorModel beta1_error(int b);
/// U == 1: M_c[g] == 1; used for noiseless checks.
ErrorModel noiseless_error();

// ---------------------------------------------------------------------------
// Catalog

/// The four simulation targets, keyed "gamma_4_05", "weibull_2",
/// "beta_4_5_scaled", "loggamma_0_4_3".
std::vector<TargetModel> catalog_targets();
/// The three simulation error laws, keyed "unif_0_1", "unif_half_3half", "beta_1_2".
std::vector<ErrorModel> catalog_errors();

std::vector<std::string> target_keys();
std::vector<std::string> error_keys();

/// Catalog key, or a family spec "gamma:SHAPE:RATE", "weibull:M",
/// "lognormal:MU:LAMBDA", "loggamma:MU:A:LAMBDA", "beta1:B", "scaled_beta:P:Q:SCALE".
TargetModel target_by_key(std::string_view key);
/// Catalog key, "noiseless", or "uniform:LO:HI", "beta1:B".
ErrorModel error_by_key(std::string_view key);

/// Y_j = X_j U_j with U drawn after the whole latent vector.
std::vector<double> contaminate(std::vector<double> latent, const ErrorModel& error, Rng& rng);

/// X i.i.d. from the target, then contaminated.
std::vector<double> sample_contaminated(const TargetModel& target, const ErrorModel& error, std::size_t n, Rng& rng);

} // namespace mellinsurv
