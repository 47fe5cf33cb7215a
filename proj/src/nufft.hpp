#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mellinsurv::detail {

/// F(m) = sum_j a_j exp(i m theta_j) for m = 0..count-1 (type-1 non-uniform
/// FFT, Gaussian gridding, about 12 correct digits relative to sum |a_j|).
std::vector<std::complex<double>> nufft_type1(std::span<const double> theta,
                                              std::span<const double> amplitude,
                                              std::size_t count);

/// F(m) by direct summation with a rotation recurrence (reference route).
std::vector<std::complex<double>> direct_type1(std::span<const double> theta,
                                               std::span<const double> amplitude,
                                               std::size_t count);

} // namespace mellinsurv::detail
