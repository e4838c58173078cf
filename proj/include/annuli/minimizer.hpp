#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include "annuli/common.hpp"
#include "annuli/problem.hpp"
#include "annuli/radial_profile.hpp"

namespace annuli {

/// The radial harmonic minimizer g_circ(z) = A z^j + B conj(z)^{-j},
/// which exists iff the bound holds.
struct HarmonicMinimizer {
    RadialProfile profile;
};

/// Below the bound: the domain is re-centered to the equal-modulus annulus
/// A(rho, r_crit) with rho = r_crit / r, and the minimizer is g_circ of the
/// critical profile on the band 1 <= |z| <= r_crit glued to the squeezing
/// map z^j/|z|^j on rho <= |z| <= 1. The squeeze band has |g| = 1 and
/// identically vanishing Jacobian.
struct HybridMinimizer {
    RadialProfile profile;  // critical profile of the harmonic band, c1 = -j^2
    double r_crit;
    double rho;
};

using Minimizer = std::variant<HarmonicMinimizer, HybridMinimizer>;

inline Minimizer solve_minimizer(const ProblemSpec& s) {
    validate(s);
    if (is_above_bound(s)) {
        return HarmonicMinimizer{solve_radial(s)};
    }
    const double rc = critical_radius(s.R, s.j);
    return HybridMinimizer{critical_profile(s.j), rc, rc / s.r};
}

/// Radial interval [lo, hi] of the normalized domain the minimizer lives on:
/// [1, r] above the bound, [rho, r_crit] below it.
struct DomainBand {
    double lo;
    double hi;
};

inline DomainBand domain_band(const ProblemSpec& s) {
    validate(s);
    if (is_above_bound(s)) return {1.0, s.r};
    const double rc = critical_radius(s.R, s.j);
    return {rc / s.r, rc};
}

namespace detail {
inline constexpr double band_tol = 1e-9;
}

/// Evaluate the radial harmonic minimizer at z in the closed annulus.
/// Requires the bound to hold (otherwise g_circ is not monotone and does
/// not map A(1,r) onto A(1,R)).
inline Complex eval_g_circ(const ProblemSpec& s, Complex z) {
    if (!is_above_bound(s)) {
        throw std::domain_error("eval_g_circ: bound not satisfied, use eval_g_diamond");
    }
    const double t = std::abs(z);
    if (t < 1.0 - detail::band_tol || t > s.r + detail::band_tol) {
        throw std::domain_error("eval_g_circ: z outside the domain annulus");
    }
    const RadialProfile p = solve_radial(s);
    const double g = profile_eval(p, t).g;
    return std::polar(g, s.j * std::arg(z));
}

/// Evaluate the hybrid squeeze+harmonic minimizer at z in A(rho, r_crit).
inline Complex eval_g_diamond(const ProblemSpec& s, Complex z) {
    if (is_above_bound(s)) {
        throw std::domain_error("eval_g_diamond: bound satisfied, use eval_g_circ");
    }
    const double rc = critical_radius(s.R, s.j);
    const double rho = rc / s.r;
    const double t = std::abs(z);
    if (t < rho - detail::band_tol || t > rc + detail::band_tol) {
        throw std::domain_error("eval_g_diamond: z outside the re-centered annulus");
    }
    const double tau = std::arg(z);
    if (t <= 1.0) {
        return std::polar(1.0, s.j * tau);  // squeeze band
    }
    const double g = profile_eval(critical_profile(s.j), t).g;
    return std::polar(g, s.j * tau);
}

enum class MinimizerKind { Harmonic, Hybrid };

struct ClosedFormEnergy {
    double value;
    MinimizerKind kind;
};

/// Minimum Dirichlet energy over degree-j maps A(1,r) -> A(1,R), in the
/// normalized coordinates (multiply by target_scale^2 for the original
/// annuli). Above the bound this is
///   E[g_circ] = 4 pi j^2 int_1^r G^2/t dt + 2 pi c1 log r,
/// below it
///   E[g_diamond] = 4 pi j^2 int_1^{r_crit} G^2/t dt - 2 pi j^2 log(rho r_crit)
/// with the critical profile on the harmonic band.
inline ClosedFormEnergy energy_closed(const ProblemSpec& s) {
    validate(s);
    if (is_above_bound(s)) {
        const RadialProfile p = solve_radial(s);
        const double value =
            4.0 * pi * s.j * s.j * integral_g2_over_t(p, s.r) + two_pi * p.c1 * std::log(s.r);
        return {value, MinimizerKind::Harmonic};
    }
    const double rc = critical_radius(s.R, s.j);
    const double rho = rc / s.r;
    const RadialProfile p = critical_profile(s.j);
    const double value = 4.0 * pi * s.j * s.j * integral_g2_over_t(p, rc) -
                         two_pi * s.j * s.j * std::log(rho * rc);
    return {value, MinimizerKind::Hybrid};
}

// ---------------------------------------------------------------------------
// Analytic polar fields of radial maps e^{ij tau} mu(t), used by the
// certificate diagnostics and as exact references in tests.
// ---------------------------------------------------------------------------

struct PolarFields {
    Complex w;
    Complex g_N;       // radial derivative
    Complex g_T;       // tangential derivative (1/t) d/dtau
    double abs_w;      // |w|
    double d_abs_dt;   // d|w|/dt
    double jacobian;   // Im(g_T conj(g_N))
};

/// Fields of w = e^{ij tau} mu(t) given mu and mu'.
inline PolarFields radial_map_fields(double mu, double dmu, int j, double t, double tau) {
    const Complex phase = std::polar(1.0, j * tau);
    PolarFields f;
    f.w = mu * phase;
    f.g_N = dmu * phase;
    f.g_T = Complex(0.0, 1.0) * (static_cast<double>(j) * mu / t) * phase;
    f.abs_w = mu;
    f.d_abs_dt = dmu;
    f.jacobian = j * mu * dmu / t;
    return f;
}

inline PolarFields g_circ_fields(const RadialProfile& p, double t, double tau) {
    const auto d = profile_eval(p, t);
    return radial_map_fields(d.g, d.dg, p.j, t, tau);
}

inline PolarFields g_diamond_fields(const RadialProfile& band_profile, double t, double tau) {
    if (t <= 1.0) {
        return radial_map_fields(1.0, 0.0, band_profile.j, t, tau);
    }
    return g_circ_fields(band_profile, t, tau);
}

}  // namespace annuli
