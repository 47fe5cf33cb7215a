#pragma once

#include <cstdint>
#include <random>

namespace mellinsurv {

/// The library-wide generator. Engine output is fixed by the standard, so
/// every variate below is reproducible across platforms.
using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `index` derived from a master seed; streams for distinct
/// indices are statistically independent.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Uniform on the open interval (0, 1) with 53 random bits.
double uniform_open(Rng& rng) noexcept;

/// Standard normal (Marsaglia polar method).
double standard_normal(Rng& rng) noexcept;

/// Gamma(shape, rate) by Marsaglia-Tsang; shape < 1 uses the U^{1/shape} boost.
/// shape == 0 is the point mass at 0.
double gamma_variate(Rng& rng, double shape, double rate);

/// Beta(a, b) as G_a / (G_a + G_b).
double beta_variate(Rng& rng, double a, double b);

/// Binomial(trials, p) as a sum of Bernoulli draws.
int binomial_variate(Rng& rng, int trials, double p);

} // namespace mellinsurv
