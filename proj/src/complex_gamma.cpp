#include "mellinsurv/errors.hpp"
#include "mellinsurv/mellin.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace mellinsurv {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
  0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
  771.32342877765313,   -176.61502916214059,   12.507343278686905,
  -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

bool is_pole(cplx z)
{
  return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

cplx lanczos_log_gamma(cplx z)
{
  // Gamma(z) = sqrt(2 pi) s^{z - 1/2} e^{-s} A(z),  s = z + g - 1/2.
  const cplx zm1 = z - 1.0;
  cplx series = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i)
    series += kLanczosCoeff[i] / (zm1 + static_cast<double>(i));
  const cplx s = zm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (zm1 + 0.5) * std::log(s) - s + std::log(series);
}

} // namespace

cplx complex_log_gamma(cplx z)
{
  if (is_pole(z))
    throw DomainError("complex_log_gamma: pole at z = " + std::to_string(z.real()));
  if (z.real() >= 0.5)
    return lanczos_log_gamma(z);
  // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
  const cplx sin_piz = std::sin(std::numbers::pi * z);
  return std::log(std::numbers::pi) - std::log(sin_piz) - lanczos_log_gamma(1.0 - z);
}

cplx complex_gamma(cplx z)
{
  return std::exp(complex_log_gamma(z));
}

} // namespace mellinsurv
