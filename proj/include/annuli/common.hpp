#pragma once

#include <complex>
#include <numbers>

namespace annuli {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace annuli
