#include "mellinsurv/models.hpp"

#include "mellinsurv/errors.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mellinsurv {

namespace bm = boost::math;

namespace {

constexpr double kTailMass = 1e-4;

void require(bool ok, const std::string& what)
{
  if (!ok)
    throw ConfigError(what);
}

std::string fmt(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

// Quantiles shifted by one part in 1e9 so that S(x_max_eff) <= 1e-4 survives rounding.
double past(double q)
{
  return q * (1.0 + 1e-9);
}

// Checks int f = 1 and fills ||S||^2; S is taken as 1 on (0, support.x_min).
void finalise(TargetModel& m)
{
  QuadratureConfig q = m.support;
  q.n_x = std::max<std::size_t>(q.n_x, 40001);
  std::vector<double> x, w;
  q.nodes(x, w);
  double mass = 0.0, norm2 = q.x_min;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mass += w[i] * m.density(x[i]);
    const double s = m.survival(x[i]);
    norm2 += w[i] * s * s;
  }
  mass += 1.0 - m.survival(q.x_min); // mass left of the quadrature window
  if (std::abs(mass - 1.0) > 1e-8)
    throw ConfigError("target " + m.name + ": density integrates to " + fmt(mass));
  m.norm2 = norm2;
}

} // namespace

std::vector<double> TargetModel::sample(Rng& rng, std::size_t n) const
{
  std::vector<double> out(n);
  for (auto& v : out)
    v = draw(rng);
  return out;
}

std::vector<double> ErrorModel::sample(Rng& rng, std::size_t n) const
{
  std::vector<double> out(n);
  for (auto& v : out)
    v = draw(rng);
  return out;
}

// ---------------------------------------------------------------------------
// Targets

TargetModel gamma_target(double shape, double rate)
{
  require(shape > 0.0 && rate > 0.0 && std::isfinite(shape) && std::isfinite(rate),
          "gamma target: need shape > 0 and rate > 0");
  TargetModel m;
  m.name = "gamma:" + fmt(shape) + ":" + fmt(rate);
  const double log_norm = shape * std::log(rate) - std::lgamma(shape);
  m.density = [=](double x) {
    if (x <= 0.0)
      return 0.0;
    return std::exp(log_norm + (shape - 1.0) * std::log(x) - rate * x);
  };
  m.survival = [=](double x) { return x <= 0.0 ? 1.0 : bm::gamma_q(shape, rate * x); };
  const double lg_shape = std::lgamma(shape);
  const double log_rate = std::log(rate);
  m.mellin_density = [=](double c, double t) {
    const cplx s(c - 1.0, t);
    return std::exp(complex_log_gamma(s + shape) - lg_shape - s * log_rate);
  };
  m.mellin_survival_12 = [=](double t) {
    const cplx s(0.5, t);
    return std::exp(complex_log_gamma(s + shape) - lg_shape - (s - 1.0) * log_rate) / (s * rate);
  };
  m.draw = [=](Rng& rng) { return gamma_variate(rng, shape, rate); };
  m.mean = shape / rate;
  m.x_max_eff = past(bm::gamma_q_inv(shape, kTailMass) / rate);
  m.support = {1e-8, 3.0 * bm::gamma_q_inv(shape, 1e-16) / rate, 100001, Spacing::log};
  finalise(m);
  return m;
}

TargetModel weibull_target(double shape)
{
  require(shape > 0.0 && std::isfinite(shape), "weibull target: need m > 0");
  TargetModel m;
  m.name = "weibull:" + fmt(shape);
  m.density = [=](double x) {
    if (x <= 0.0)
      return 0.0;
    const double xm = std::pow(x, shape);
    return shape * xm / x * std::exp(-xm);
  };
  m.survival = [=](double x) { return x <= 0.0 ? 1.0 : std::exp(-std::pow(x, shape)); };
  // ((c-1+it)/m) Gamma((c-1+it)/m) written as Gamma(1 + (c-1+it)/m).
  m.mellin_density = [=](double c, double t) { return complex_gamma(1.0 + cplx(c - 1.0, t) / shape); };
  // int x^{s-1} exp(-x^m) dx = Gamma(s/m) / m
  m.mellin_survival_12 = [=](double t) { return complex_gamma(cplx(0.5, t) / shape) / shape; };
  m.draw = [=](Rng& rng) { return std::pow(-std::log(uniform_open(rng)), 1.0 / shape); };
  m.mean = std::tgamma(1.0 + 1.0 / shape);
  m.x_max_eff = past(std::pow(std::log(1.0 / kTailMass), 1.0 / shape));
  m.support = {1e-8, 1.5 * std::pow(40.0, 1.0 / shape), 100001, Spacing::log};
  finalise(m);
  return m;
}

TargetModel lognormal_target(double mu, double lambda)
{
  require(std::isfinite(mu) && lambda > 0.0 && std::isfinite(lambda),
          "lognormal target: need lambda > 0");
  TargetModel m;
  m.name = "lognormal:" + fmt(mu) + ":" + fmt(lambda);
  m.density = [=](double x) {
    if (x <= 0.0)
      return 0.0;
    const double z = (std::log(x) - mu) / lambda;
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * lambda * x);
  };
  m.survival = [=](double x) {
    if (x <= 0.0)
      return 1.0;
    return 0.5 * std::erfc((std::log(x) - mu) / (lambda * std::numbers::sqrt2));
  };
  m.mellin_density = [=](double c, double t) {
    const cplx s(c - 1.0, t);
    return std::exp(mu * s + 0.5 * lambda * lambda * s * s);
  };
  m.mellin_survival_12 = [=](double t) {
    const cplx s(0.5, t);
    return std::exp(mu * s + 0.5 * lambda * lambda * s * s) / s;
  };
  m.draw = [=](Rng& rng) { return std::exp(mu + lambda * standard_normal(rng)); };
  m.mean = std::exp(mu + 0.5 * lambda * lambda);
  const double z = std::numbers::sqrt2 * bm::erfc_inv(2.0 * kTailMass);
  m.x_max_eff = past(std::exp(mu + lambda * z));
  m.support = {std::exp(mu - 14.0 * lambda), std::exp(mu + 14.0 * lambda), 100001, Spacing::log};
  finalise(m);
  return m;
}

TargetModel scaled_loggamma_target(double mu, double a, double lambda)
{
  require(std::isfinite(mu) && a > 0.0 && lambda > 1.0, "loggamma target: need a > 0 and lambda > 1");
  TargetModel m;
  m.name = "loggamma:" + fmt(mu) + ":" + fmt(a) + ":" + fmt(lambda);
  const double lo = std::exp(mu);
  const double log_norm = a * std::log(lambda) + lambda * mu - std::lgamma(a);
  m.density = [=](double x) {
    if (x <= lo)
      return 0.0;
    const double lx = std::log(x);
    return std::exp(log_norm - (lambda + 1.0) * lx + (a - 1.0) * std::log(lx - mu));
  };
  m.survival = [=](double x) { return x <= lo ? 1.0 : bm::gamma_q(a, lambda * (std::log(x) - mu)); };
  const double log_lambda_a = a * std::log(lambda);
  m.mellin_density = [=](double c, double t) {
    const cplx s(c - 1.0, t);
    return std::exp(log_lambda_a + mu * s - a * std::log(lambda - s));
  };
  m.mellin_survival_12 = [=](double t) {
    const cplx s(0.5, t);
    return std::exp(log_lambda_a + mu * s - a * std::log(lambda - s)) / s;
  };
  m.draw = [=](Rng& rng) { return std::exp(mu + gamma_variate(rng, a, lambda)); };
  m.mean = std::exp(mu) * std::pow(lambda / (lambda - 1.0), a);
  m.x_max_eff = past(std::exp(mu + bm::gamma_q_inv(a, kTailMass) / lambda));
  // x^{1/2} f(x) has a tail of order x^{1/2 - lambda}; stop where it is below ~1e-13
  m.support = {lo, std::exp(mu + 30.0 / (lambda - 0.5) + 3.0 * a / lambda), 200001, Spacing::log};
  finalise(m);
  return m;
}

TargetModel beta1_target(int b)
{
  require(b >= 1, "beta1 target: need integer b >= 1");
  TargetModel m;
  m.name = "beta1:" + std::to_string(b);
  const double bd = b;
  m.density = [=](double x) { return (x > 0.0 && x <= 1.0) ? bd * std::pow(1.0 - x, bd - 1.0) : 0.0; };
  m.survival = [=](double x) {
    if (x <= 0.0)
      return 1.0;
    return x >= 1.0 ? 0.0 : std::pow(1.0 - x, bd);
  };
  m.mellin_density = [=](double c, double t) {
    cplx acc = 1.0;
    for (int j = 1; j <= b; ++j)
      acc *= static_cast<double>(j) / cplx(c - 1.0 + j, t);
    return acc;
  };
  m.mellin_survival_12 = [=](double t) {
    cplx acc = 1.0;
    for (int j = 1; j <= b; ++j)
      acc *= static_cast<double>(j) / cplx(0.5 + j, t);
    return acc / cplx(0.5, t);
  };
  m.draw = [=](Rng& rng) { return 1.0 - std::pow(uniform_open(rng), 1.0 / bd); };
  m.mean = 1.0 / (bd + 1.0);
  m.x_max_eff = past(1.0 - std::pow(kTailMass, 1.0 / bd));
  m.support = {1e-8, 1.0, 200001, Spacing::log};
  finalise(m);
  return m;
}

TargetModel scaled_beta_target(double p, double q, double scale)
{
  require(p > 0.0 && q > 0.0 && scale > 0.0, "scaled beta target: need p, q, scale > 0");
  TargetModel m;
  m.name = "scaled_beta:" + fmt(p) + ":" + fmt(q) + ":" + fmt(scale);
  const double log_beta = std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
  m.density = [=](double x) {
    if (x <= 0.0 || x >= scale)
      return 0.0;
    const double u = x / scale;
    return std::exp((p - 1.0) * std::log(u) + (q - 1.0) * std::log1p(-u) - log_beta) / scale;
  };
  m.survival = [=](double x) {
    if (x <= 0.0)
      return 1.0;
    return x >= scale ? 0.0 : bm::ibetac(p, q, x / scale);
  };
  const double log_scale = std::log(scale);
  const double lg_p = std::lgamma(p);
  const double lg_pq = std::lgamma(p + q);
  m.mellin_density = [=](double c, double t) {
    const cplx s(c - 1.0, t);
    return std::exp(s * log_scale + complex_log_gamma(p + s) + lg_pq - lg_p - complex_log_gamma(p + q + s));
  };
  m.mellin_survival_12 = [=](double t) {
    const cplx s(0.5, t);
    return std::exp(s * log_scale + complex_log_gamma(p + s) + lg_pq - lg_p - complex_log_gamma(p + q + s)) /
           s;
  };
  m.draw = [=](Rng& rng) { return scale * beta_variate(rng, p, q); };
  m.mean = scale * p / (p + q);
  m.x_max_eff = std::min(scale, past(scale * bm::ibetac_inv(p, q, kTailMass)));
  m.support = {1e-8, scale, 100001, Spacing::log};
  finalise(m);
  return m;
}

// ---------------------------------------------------------------------------
// Errors

ErrorModel uniform_error(double lo, double hi)
{
  require(lo >= 0.0 && hi > lo, "uniform error: need 0 <= lo < hi");
  ErrorModel e;
  e.name = "uniform:" + fmt(lo) + ":" + fmt(hi);
  const double width = hi - lo;
  e.density = [=](double u) { return (u >= lo && u <= hi) ? 1.0 / width : 0.0; };
  e.mellin_density = [=](double c, double t) {
    const cplx s(c, t);
    const cplx upper = std::exp(s * std::log(hi));
    const cplx lower = lo > 0.0 ? std::exp(s * std::log(lo)) : cplx(0.0);
    return (upper - lower) / (s * width);
  };
  e.draw = [=](Rng& rng) { return lo + width * uniform_open(rng); };
  e.gamma_exponent = 1.0;
  // |M_{3/2}[g](t)| (1 + t^2)^{1/2} = |hi^{3/2+it} - lo^{3/2+it}| / width * sqrt((1+t^2)/(9/4+t^2))
  const double a = std::pow(hi, 1.5), b = std::pow(lo, 1.5);
  e.c_lower = (a - b) / width * (2.0 / 3.0);
  e.c_upper = (a + b) / width;
  e.sigma_u = 0.5 * (lo + hi);
  e.xg_sup = hi / width;
  e.support = {lo > 0.0 ? lo : 1e-8, hi, 200001, Spacing::log};
  return e;
}

ErrorModel beta1_error(int b)
{
  require(b >= 1, "beta1 error: need integer b >= 1");
  ErrorModel e;
  e.name = "beta1:" + std::to_string(b);
  const double bd = b;
  e.density = [=](double u) { return (u > 0.0 && u <= 1.0) ? bd * std::pow(1.0 - u, bd - 1.0) : 0.0; };
  e.mellin_density = [=](double c, double t) {
    cplx acc = 1.0;
    for (int j = 1; j <= b; ++j)
      acc *= static_cast<double>(j) / cplx(c - 1.0 + j, t);
    return acc;
  };
  e.draw = [=](Rng& rng) { return 1.0 - std::pow(uniform_open(rng), 1.0 / bd); };
  e.gamma_exponent = bd;
  // prod_j j |1/2 + j + it|^{-1} (1+t^2)^{1/2}: extremes at t = 0 and t -> inf
  double at_zero = 1.0;
  double at_inf = 1.0;
  for (int j = 1; j <= b; ++j) {
    at_zero *= static_cast<double>(j) / (0.5 + j);
    at_inf *= static_cast<double>(j);
  }
  e.c_lower = std::min(at_zero, at_inf);
  e.c_upper = std::max(at_zero, at_inf);
  e.sigma_u = 1.0 / (bd + 1.0);
  // sup u b (1-u)^{b-1} attained at u = 1/b
  e.xg_sup = b == 1 ? 1.0 : std::pow(1.0 - 1.0 / bd, bd - 1.0);
  e.support = {1e-8, 1.0, 200001, Spacing::log};
  return e;
}

ErrorModel noiseless_error()
{
  ErrorModel e;
  e.name = "noiseless";
  e.density = [](double) { return std::nan(""); };
  e.mellin_density = [](double, double) { return cplx(1.0); };
  e.draw = [](Rng&) { return 1.0; };
  e.gamma_exponent = 0.0;
  e.c_lower = 1.0;
  e.c_upper = 1.0;
  e.sigma_u = 1.0;
  e.xg_sup = std::numeric_limits<double>::infinity();
  e.point_mass = true;
  e.support = {0.5, 2.0, 2, Spacing::log};
  return e;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

struct TargetEntry
{
  const char* key;
  TargetModel (*make)();
};

struct ErrorEntry
{
  const char* key;
  ErrorModel (*make)();
};

const TargetEntry kTargets[] = {
  {"gamma_4_05", [] { return gamma_target(4.0, 0.5); }},
  {"weibull_2", [] { return weibull_target(2.0); }},
  {"beta_4_5_scaled", [] { return scaled_beta_target(4.0, 5.0, 2.0); }},
  {"loggamma_0_4_3", [] { return scaled_loggamma_target(0.0, 4.0, 3.0); }},
};

const ErrorEntry kErrors[] = {
  {"unif_0_1", [] { return uniform_error(0.0, 1.0); }},
  {"unif_half_3half", [] { return uniform_error(0.5, 1.5); }},
  {"beta_1_2", [] { return beta1_error(2); }},
};

std::vector<double> parse_params(std::string_view spec, std::string_view family, std::size_t count)
{
  std::vector<double> out;
  std::size_t pos = family.size();
  while (pos < spec.size() && spec[pos] == ':') {
    ++pos;
    const std::size_t end = std::min(spec.find(':', pos), spec.size());
    double v = 0.0;
    const auto res = std::from_chars(spec.data() + pos, spec.data() + end, v);
    if (res.ec != std::errc() || res.ptr != spec.data() + end)
      throw ConfigError("bad parameter in model key '" + std::string(spec) + "'");
    out.push_back(v);
    pos = end;
  }
  if (out.size() != count || pos != spec.size())
    throw ConfigError("model key '" + std::string(spec) + "' needs " + std::to_string(count) + " parameters");
  return out;
}

bool has_family(std::string_view key, std::string_view family)
{
  return key.size() > family.size() && key.substr(0, family.size()) == family && key[family.size()] == ':';
}

int as_int(double v, std::string_view key)
{
  if (v != std::floor(v) || v < 1.0 || v > 1000.0)
    throw ConfigError("model key '" + std::string(key) + "' needs an integer parameter");
  return static_cast<int>(v);
}

} // namespace

std::vector<TargetModel> catalog_targets()
{
  std::vector<TargetModel> out;
  for (const auto& e : kTargets) {
    out.push_back(e.make());
    out.back().name = e.key;
  }
  return out;
}

std::vector<ErrorModel> catalog_errors()
{
  std::vector<ErrorModel> out;
  for (const auto& e : kErrors) {
    out.push_back(e.make());
    out.back().name = e.key;
  }
  return out;
}

std::vector<std::string> target_keys()
{
  std::vector<std::string> out;
  for (const auto& e : kTargets)
    out.emplace_back(e.key);
  return out;
}

std::vector<std::string> error_keys()
{
  std::vector<std::string> out;
  for (const auto& e : kErrors)
    out.emplace_back(e.key);
  return out;
}

TargetModel target_by_key(std::string_view key)
{
  for (const auto& e : kTargets) {
    if (key == e.key) {
      TargetModel m = e.make();
      m.name = e.key;
      return m;
    }
  }
  if (has_family(key, "gamma")) {
    const auto p = parse_params(key, "gamma", 2);
    return gamma_target(p[0], p[1]);
  }
  if (has_family(key, "weibull"))
    return weibull_target(parse_params(key, "weibull", 1)[0]);
  if (has_family(key, "lognormal")) {
    const auto p = parse_params(key, "lognormal", 2);
    return lognormal_target(p[0], p[1]);
  }
  if (has_family(key, "loggamma")) {
    const auto p = parse_params(key, "loggamma", 3);
    return scaled_loggamma_target(p[0], p[1], p[2]);
  }
  if (has_family(key, "beta1"))
    return beta1_target(as_int(parse_params(key, "beta1", 1)[0], key));
  if (has_family(key, "scaled_beta")) {
    const auto p = parse_params(key, "scaled_beta", 3);
    return scaled_beta_target(p[0], p[1], p[2]);
  }
  throw ConfigError("unknown target key '" + std::string(key) + "'");
}

ErrorModel error_by_key(std::string_view key)
{
  for (const auto& e : kErrors) {
    if (key == e.key) {
      ErrorModel m = e.make();
      m.name = e.key;
      return m;
    }
  }
  if (key == "noiseless")
    return noiseless_error();
  if (has_family(key, "uniform")) {
    const auto p = parse_params(key, "uniform", 2);
    return uniform_error(p[0], p[1]);
  }
  if (has_family(key, "beta1"))
    return beta1_error(as_int(parse_params(key, "beta1", 1)[0], key));
  throw ConfigError("unknown error key '" + std::string(key) + "'");
}

std::vector<double> contaminate(std::vector<double> latent, const ErrorModel& error, Rng& rng)
{
  for (auto& v : latent)
    v *= error.draw(rng);
  return latent;
}

std::vector<double> sample_contaminated(const TargetModel& target, const ErrorModel& error, std::size_t n, Rng& rng)
{
  return contaminate(target.sample(rng, n), error, rng);
}

} // namespace mellinsurv
