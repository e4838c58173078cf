#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace annuli {

class InvalidAnnulus : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class InvalidTarget : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Normalized transfer problem: map the annulus A(1, r) onto the annulus
/// A(1, R) by a degree-j mapping that sends the inner boundary onto the
/// inner boundary and the outer onto the outer.
///
/// Arbitrary annuli A(a, b) -> A(c, d) reduce to this form; the scale
/// factors are kept so energies and maps can be expressed in the original
/// coordinates (the energy picks up a factor target_scale^2, the minimizer
/// itself is unchanged).
struct ProblemSpec {
    double r;  // outer radius of the normalized domain annulus, > 1
    double R;  // outer radius of the normalized target annulus, > 1
    int j;     // topological degree, >= 1
    double domain_scale = 1.0;  // inner radius a of the original domain annulus
    double target_scale = 1.0;  // inner radius c of the original target annulus
};

inline void validate(const ProblemSpec& s) {
    if (!(s.r > 1.0) || !std::isfinite(s.r)) {
        throw InvalidAnnulus("domain ratio r must be finite and > 1");
    }
    if (!(s.R > 1.0) || !std::isfinite(s.R)) {
        throw InvalidTarget("target ratio R must be finite and > 1");
    }
    if (s.j < 1) {
        throw InvalidAnnulus("degree j must be a positive integer");
    }
    if (!(s.domain_scale > 0.0) || !(s.target_scale > 0.0)) {
        throw InvalidAnnulus("annulus scales must be positive");
    }
}

/// Reduce A(a, b) -> A(c, d) with degree j to the normalized form.
inline ProblemSpec normalize_problem(double a, double b, double c, double d, int j) {
    if (!(a > 0.0) || !(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidAnnulus("domain annulus requires 0 < a < b");
    }
    if (!(c > 0.0) || !(d > c) || !std::isfinite(c) || !std::isfinite(d)) {
        throw InvalidAnnulus("target annulus requires 0 < c < d");
    }
    if (j < 1) {
        throw InvalidAnnulus("degree j must be a positive integer");
    }
    ProblemSpec s{b / a, d / c, j, a, c};
    validate(s);
    return s;
}

/// Right-hand side of the degree-j Nitsche-type bound,
/// (1/2) r^{-j} (1 + r^{2j}) = cosh(j log r).
inline double nitsche_rhs(double r, int j) {
    if (!(r > 1.0) || j < 1) {
        throw InvalidAnnulus("nitsche_rhs requires r > 1 and j >= 1");
    }
    const double rj = std::pow(r, j);
    return 0.5 * (rj + 1.0 / rj);
}

// Boundary cases within relative 1e-12 of the bound count as satisfied,
// so the critical harmonic map is classified as existing.
inline constexpr double bound_rel_tol = 1e-12;

/// True iff the radial degree-j harmonic map A(1,r) -> A(1,R) exists.
inline bool is_above_bound(const ProblemSpec& s) {
    validate(s);
    const double rhs = nitsche_rhs(s.r, s.j);
    return s.R >= rhs * (1.0 - bound_rel_tol);
}

/// The critical domain radius: the unique r_crit with
/// nitsche_rhs(r_crit, j) = R. Monotone increasing in R; equals 1 at R = 1.
inline double critical_radius(double R, int j) {
    if (!(R >= 1.0) || !std::isfinite(R)) {
        throw InvalidTarget("critical_radius requires R >= 1");
    }
    if (j < 1) {
        throw InvalidAnnulus("degree j must be a positive integer");
    }
    return std::pow(R + std::sqrt(R * R - 1.0), 1.0 / j);
}

}  // namespace annuli
