#pragma once

// Shared helpers for the test suites: independent quadrature oracles,
// rotation-fitted map comparison, and seeded admissible perturbations.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "annuli/annuli.hpp"

namespace testsupport {

using annuli::Complex;
using annuli::DiscreteMap;
using annuli::PolarGrid;
using annuli::ProblemSpec;

/// Composite Simpson rule; n subintervals (rounded up to even).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Quadrature oracle for the continuum Dirichlet energy of a radial map
/// e^{ij tau} mu(t): E = 2 pi int (mu'^2 + j^2 mu^2 / t^2) t dt.
inline double radial_energy_oracle(const std::function<double(double)>& mu,
                                   const std::function<double(double)>& dmu, int j, double lo,
                                   double hi, int n = 200000) {
    return annuli::two_pi * simpson(
                                [&](double t) {
                                    const double m = mu(t);
                                    const double d = dmu(t);
                                    return (d * d + j * j * m * m / (t * t)) * t;
                                },
                                lo, hi, n);
}

/// Best rotation angle aligning m with the reference samples, by the phase
/// of the cross-correlation.
inline double fitted_rotation(const DiscreteMap& m, const std::vector<Complex>& ref) {
    Complex corr(0.0, 0.0);
    for (std::size_t n = 0; n < m.values.size(); ++n) corr += m.values[n] * std::conj(ref[n]);
    return std::arg(corr);
}

inline double rotation_fitted_rms(const DiscreteMap& m, const std::vector<Complex>& ref) {
    const Complex rot = std::polar(1.0, fitted_rotation(m, ref));
    double ss = 0.0;
    for (std::size_t n = 0; n < m.values.size(); ++n) {
        ss += std::norm(m.values[n] - rot * ref[n]);
    }
    return std::sqrt(ss / static_cast<double>(m.values.size()));
}

inline std::vector<Complex> reference_g_circ(const ProblemSpec& s, const PolarGrid& grid) {
    const auto p = annuli::solve_radial(s);
    std::vector<Complex> ref(grid.node_count());
    for (int i = 0; i < grid.n_radial; ++i) {
        for (int k = 0; k < grid.n_angular; ++k) {
            ref[static_cast<std::size_t>(i) * grid.n_angular + k] =
                annuli::g_circ_fields(p, grid.radius(i), grid.angle(k)).w;
        }
    }
    return ref;
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Seeded smooth admissible perturbation of a base map: low-harmonic noise
/// in modulus and phase, faded at the boundary rows, then clamped onto the
/// shell [1, R]. Windings and boundary moduli are preserved.
inline DiscreteMap perturb_admissible(const DiscreteMap& base, std::uint64_t seed,
                                      double amplitude) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    const int modes = 4;
    std::vector<double> am(modes), pm(modes), aa(modes), pa(modes), rm(modes), ra(modes);
    for (int p = 0; p < modes; ++p) {
        am[p] = amplitude * (2.0 * uniform01(rng) - 1.0);
        pm[p] = annuli::two_pi * uniform01(rng);
        aa[p] = amplitude * (2.0 * uniform01(rng) - 1.0);
        pa[p] = annuli::two_pi * uniform01(rng);
        rm[p] = 1.0 + std::floor(3.0 * uniform01(rng));  // radial bump harmonics
        ra[p] = 1.0 + std::floor(3.0 * uniform01(rng));
    }
    DiscreteMap out = base;
    const PolarGrid& g = base.grid;
    const double x0 = std::log(g.t_min);
    const double x1 = std::log(g.t_max);
    for (int i = 1; i < g.n_radial - 1; ++i) {
        const double x = std::log(g.radius(i));
        const double u = (x - x0) / (x1 - x0);
        for (int k = 0; k < g.n_angular; ++k) {
            const double tau = g.angle(k);
            double dmu = 0.0, darg = 0.0;
            for (int p = 0; p < modes; ++p) {
                dmu += am[p] * std::sin((p + 1) * tau + pm[p]) * std::sin(rm[p] * annuli::pi * u);
                darg += aa[p] * std::sin((p + 1) * tau + pa[p]) * std::sin(ra[p] * annuli::pi * u);
            }
            const Complex w = base.at(i, k);
            const double mu = std::abs(w) * (1.0 + dmu);
            Complex v = std::polar(mu, std::arg(w) + darg);
            const double a = std::abs(v);
            if (a < 1.0) v /= a;
            if (a > base.target_R) v *= base.target_R / a;
            out.at(i, k) = v;
        }
    }
    return out;
}

}  // namespace testsupport
