#include "mellinsurv/random.hpp"

#include "mellinsurv/errors.hpp"

#include <cmath>

namespace mellinsurv {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double uniform_open(Rng& rng) noexcept
{
  // (k + 0.5) / 2^53 for k in [0, 2^53): never 0, never 1.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(Rng& rng) noexcept
{
  for (;;) {
    const double u = 2.0 * uniform_open(rng) - 1.0;
    const double v = 2.0 * uniform_open(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0)
      return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double gamma_variate(Rng& rng, double shape, double rate)
{
  if (!(shape >= 0.0) || !(rate > 0.0))
    throw DomainError("gamma_variate: need shape >= 0 and rate > 0");
  if (shape == 0.0)
    return 0.0;
  if (shape < 1.0) {
    const double u = uniform_open(rng);
    return gamma_variate(rng, shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2)
      return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return d * v / rate;
  }
}

double beta_variate(Rng& rng, double a, double b)
{
  const double ga = gamma_variate(rng, a, 1.0);
  const double gb = gamma_variate(rng, b, 1.0);
  return ga / (ga + gb);
}

int binomial_variate(Rng& rng, int trials, double p)
{
  if (trials < 0 || !(p >= 0.0 && p <= 1.0))
    throw DomainError("binomial_variate: need trials >= 0 and p in [0, 1]");
  int k = 0;
  for (int i = 0; i < trials; ++i)
    k += uniform_open(rng) < p ? 1 : 0;
  return k;
}

} // namespace mellinsurv
