#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "annuli/problem.hpp"

namespace annuli {

enum class Regime {
    Conformal,   // c1 = 0, i.e. R = r^j, minimizer is z^j
    Elastic,     // c1 > 0, i.e. R > r^j
    NonElastic,  // -j^2 <= c1 < 0, i.e. R < r^j
};

/// Radial factor G(t) = A t^j + B t^{-j} of the degree-j radial harmonic
/// map e^{ij tau} G(t), together with the first integral constant
/// c1 = t^2 G'^2 - j^2 G^2 (constant along solutions of the radial ODE
/// -j^2 G + t G' + t^2 G'' = 0).
struct RadialProfile {
    double A;
    double B;
    double c1;
    int j;
    Regime regime;

    bool monotone() const { return A >= B; }  // G' >= 0 on [1, r]
};

struct ProfileDerivatives {
    double g;    // G(t)
    double dg;   // G'(t)
    double d2g;  // G''(t)
};

namespace detail {

// c1 in the closed form 4 j^2 (1 + R^2 - R (r^j + r^{-j})) / (r^j - r^{-j})^2,
// evaluated with the numerator factored as (1 - R r^j)(1 - R r^{-j}); the
// factored form is algebraically identical and avoids the cancellation of
// the textbook sum for thin annuli.
inline double c1_closed_form(double r, double R, int j) {
    const double rj = std::pow(r, j);
    const double diff = rj - 1.0 / rj;
    return 4.0 * j * j * (1.0 - R * rj) * (1.0 - R / rj) / (diff * diff);
}

inline Regime classify_regime(double c1, int j) {
    // Sign classification with a small absolute guard so that exactly
    // conformal problems computed in floating point land on Conformal.
    const double tol = 1e-12 * j * j;
    if (std::abs(c1) <= tol) return Regime::Conformal;
    return c1 > 0.0 ? Regime::Elastic : Regime::NonElastic;
}

}  // namespace detail

/// Solve the boundary correspondence G(1) = 1, G(r) = R for the radial
/// profile. The two expressions for c1 (closed form and -4 j^2 A B) are
/// required to agree to relative 1e-12.
inline RadialProfile solve_radial(const ProblemSpec& s) {
    validate(s);
    const double rj = std::pow(s.r, s.j);
    const double r2j = rj * rj;
    const double A = (1.0 - rj * s.R) / (1.0 - r2j);
    const double B = (rj * s.R - r2j) / (1.0 - r2j);
    const double c1 = -4.0 * s.j * s.j * A * B;
    const double c1_check = detail::c1_closed_form(s.r, s.R, s.j);
    if (std::abs(c1 - c1_check) > 1e-12 * std::max(1.0, std::abs(c1))) {
        throw std::runtime_error("solve_radial: c1 consistency check failed");
    }
    return RadialProfile{A, B, c1, s.j, detail::classify_regime(c1, s.j)};
}

/// Critical profile G(t) = cosh(j log t) = (t^j + t^{-j})/2, the boundary
/// case of the bound, with c1 = -j^2 exactly.
inline RadialProfile critical_profile(int j) {
    if (j < 1) throw InvalidAnnulus("degree j must be a positive integer");
    return RadialProfile{0.5, 0.5, -static_cast<double>(j) * j, j, Regime::NonElastic};
}

/// Evaluate G, G', G'' at t > 0.
inline ProfileDerivatives profile_eval(const RadialProfile& p, double t) {
    if (!(t > 0.0)) {
        throw std::domain_error("profile_eval requires t > 0");
    }
    const int j = p.j;
    const double tj = std::pow(t, j);
    const double g = p.A * tj + p.B / tj;
    const double dg = j * (p.A * tj - p.B / tj) / t;
    const double d2g = (j * (j - 1) * p.A * tj + j * (j + 1) * p.B / tj) / (t * t);
    return {g, dg, d2g};
}

/// Invert G on the monotone band: returns t = F(s) with G(t) = s.
///
/// Uses t^j = (s + sqrt(s^2 - 4AB)) / (2A); the discriminant is evaluated
/// as (s^2 - 1) + (A - B)^2, which is exact at s = 1 and avoids the
/// cancellation in s^2 - 4AB near the critical case. The conformal
/// profile (B = 0) reduces to t = s^{1/j} directly.
inline double profile_invert(const RadialProfile& p, double s) {
    if (!p.monotone()) {
        throw std::domain_error("profile_invert: G is not monotone on the band");
    }
    if (!(s >= 1.0 - 1e-12)) {
        throw std::out_of_range("profile_invert: s below the band [1, R]");
    }
    if (p.B == 0.0) {
        return std::pow(s / p.A, 1.0 / p.j);
    }
    const double dab = p.A - p.B;
    const double disc = std::max(0.0, (s - 1.0) * (s + 1.0) + dab * dab);
    const double u = (s + std::sqrt(disc)) / (2.0 * p.A);
    return std::pow(u, 1.0 / p.j);
}

/// d/ds log F(s) = 1 / sqrt(j^2 s^2 + c1) on the monotone band.
inline double inverse_log_derivative(const RadialProfile& p, double s) {
    const double v = std::max(0.0, p.j * p.j * s * s + p.c1);
    return 1.0 / std::sqrt(v);
}

// ---------------------------------------------------------------------------
// Closed-form integrals. These are the hand-integrated antiderivatives used
// by the energy and certificate formulas; they double as oracles for the
// quadrature-based modules.
// ---------------------------------------------------------------------------

/// Integral of G(t)^2 / t over [1, r].
inline double integral_g2_over_t(const RadialProfile& p, double r) {
    const int j = p.j;
    const double r2j = std::pow(r, 2 * j);
    return p.A * p.A * (r2j - 1.0) / (2.0 * j) + 2.0 * p.A * p.B * std::log(r) +
           p.B * p.B * (1.0 - 1.0 / r2j) / (2.0 * j);
}

namespace detail {

// Antiderivative of 1 / sqrt(j^2 s^2 + c1):  (1/j) log(j s + sqrt(j^2 s^2 + c1)).
inline double antider_inv_sqrt(double s, double c1, int j) {
    const double v = std::sqrt(std::max(0.0, j * j * s * s + c1));
    return std::log(j * s + v) / j;
}

// Antiderivative of s^2 / sqrt(j^2 s^2 + c1).
inline double antider_s2_inv_sqrt(double s, double c1, int j) {
    const double v = std::sqrt(std::max(0.0, j * j * s * s + c1));
    return s * v / (2.0 * j * j) - c1 / (2.0 * j * j) * antider_inv_sqrt(s, c1, j);
}

// Antiderivative of sqrt(j^2 s^2 + c1).
inline double antider_sqrt(double s, double c1, int j) {
    const double v = std::sqrt(std::max(0.0, j * j * s * s + c1));
    return 0.5 * s * v + 0.5 * c1 * antider_inv_sqrt(s, c1, j);
}

}  // namespace detail

/// Integral of 1 / sqrt(j^2 s^2 + c1) over [1, upper]. Evaluates to log t
/// at upper = G(t) for profiles with first integral c1.
inline double log_radius_integral(const RadialProfile& p, double upper) {
    return detail::antider_inv_sqrt(upper, p.c1, p.j) - detail::antider_inv_sqrt(1.0, p.c1, p.j);
}

}  // namespace annuli
