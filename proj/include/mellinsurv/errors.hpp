#pragma once

#include <stdexcept>
#include <string>

namespace mellinsurv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (pole, non-positive x, empty sample, ...).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// The error density's Mellin transform vanishes (numerically) on the t-grid.
class G0Violation : public Error
{
public:
  G0Violation(double t, double modulus)
    : Error("Mellin transform of the error density vanishes at t = " + std::to_string(t) +
            " (|M| = " + std::to_string(modulus) + ")"),
      t_(t)
  {
  }
  double t() const noexcept { return t_; }

private:
  double t_;
};

/// Heuristic survival estimate whose positive part integrates to zero.
class DegenerateEstimate : public Error
{
public:
  using Error::Error;
};

/// A Mellin series that should be Hermitian produced a non-real inverse.
class HermitianViolation : public Error
{
public:
  using Error::Error;
};

/// Invalid or unsupported configuration (bad key, bad model parameters, ...).
class ConfigError : public Error
{
public:
  using Error::Error;
};

} // namespace mellinsurv
