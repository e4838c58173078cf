#pragma once

#include <cmath>

#include "annuli/grid.hpp"
#include "annuli/minimizer.hpp"

namespace annuli {

/// Sample the radial harmonic minimizer on the problem's domain band.
inline DiscreteMap sample_g_circ(const ProblemSpec& s, const PolarGrid& grid) {
    return sample_map([&](Complex z) { return eval_g_circ(s, z); }, grid, s.R, s.j);
}

/// Sample the hybrid squeeze+harmonic minimizer (below-bound regime).
inline DiscreteMap sample_g_diamond(const ProblemSpec& s, const PolarGrid& grid) {
    return sample_map([&](Complex z) { return eval_g_diamond(s, z); }, grid, s.R, s.j);
}

/// z^j with its modulus rescaled affinely onto [1, R]; reduces to z^j when
/// the problem is conformal (R = r^j on the grid band [1, r]).
inline DiscreteMap sample_power(const ProblemSpec& s, const PolarGrid& grid) {
    const double lo = std::pow(grid.t_min, s.j);
    const double hi = std::pow(grid.t_max, s.j);
    return sample_map(
        [&](Complex z) {
            const double tj = std::pow(std::abs(z), s.j);
            const double mu = 1.0 + (s.R - 1.0) * (tj - lo) / (hi - lo);
            return std::polar(mu, s.j * std::arg(z));
        },
        grid, s.R, s.j);
}

}  // namespace annuli
