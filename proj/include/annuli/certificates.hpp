#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "annuli/grid.hpp"
#include "annuli/minimizer.hpp"
#include "annuli/operators.hpp"
#include "annuli/problem.hpp"
#include "annuli/radial_profile.hpp"

namespace annuli {

class ConfigurationError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Weight function supplied as a sampled table with linear interpolation.
/// The closed-side integrals treat the table as exactly piecewise linear,
/// so both sides of each Lagrangian identity refer to the same function.
struct WeightTable {
    std::vector<double> x;
    std::vector<double> y;

    static WeightTable sample(const std::function<double(double)>& f, double a, double b, int n) {
        if (n < 2 || !(b > a)) throw std::invalid_argument("WeightTable::sample: bad range");
        WeightTable w;
        w.x.resize(n);
        w.y.resize(n);
        for (int i = 0; i < n; ++i) {
            w.x[i] = a + (b - a) * i / (n - 1);
            w.y[i] = f(w.x[i]);
        }
        return w;
    }

    double operator()(double t) const {
        if (x.size() < 2) throw std::invalid_argument("WeightTable: need at least 2 knots");
        if (t <= x.front()) return y.front();
        if (t >= x.back()) return y.back();
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
        const double lam = (t - x[k]) / (x[k + 1] - x[k]);
        return (1.0 - lam) * y[k] + lam * y[k + 1];
    }

    /// Exact integral of the piecewise-linear interpolant.
    double integral() const {
        double s = 0.0;
        for (std::size_t k = 0; k + 1 < x.size(); ++k) {
            s += 0.5 * (x[k + 1] - x[k]) * (y[k] + y[k + 1]);
        }
        return s;
    }

    /// Exact integral of t * w(t) for the piecewise-linear interpolant.
    double moment_integral() const {
        double s = 0.0;
        for (std::size_t k = 0; k + 1 < x.size(); ++k) {
            const double dx = x[k + 1] - x[k];
            s += dx * (2.0 * x[k] * y[k] + x[k] * y[k + 1] + x[k + 1] * y[k] +
                       2.0 * x[k + 1] * y[k + 1]) / 6.0;
        }
        return s;
    }
};

struct LagrangianValue {
    double lhs;  // grid quadrature over the map
    double rhs;  // closed integral depending only on the admissibility class
};

/// (a) A function of t = |z| only: both sides equal 2 pi int t M(t) dt
/// regardless of the map.
inline LagrangianValue lagrangian_a(const DiscreteMap& m, const WeightTable& M) {
    std::vector<double> density(m.values.size());
    const int nr = m.grid.n_radial;
    for (int i = 0; i < nr; ++i) {
        const double v = M(m.grid.radius(i));
        for (int k = 0; k < m.grid.n_angular; ++k) density[m.index(i, k)] = v;
    }
    return {integrate_density(m, density), two_pi * M.moment_integral()};
}

/// (b) Pullback of a form on the target: int N(|g|) det Dg equals
/// 2 pi j int s N(s) ds for every admissible degree-j map.
inline LagrangianValue lagrangian_b(const DiscreteMap& m, const WeightTable& N,
                                    const Differentials& d) {
    const auto J = jacobian(m, d);
    std::vector<double> density(m.values.size());
    for (std::size_t n = 0; n < m.values.size(); ++n) {
        density[n] = N(std::abs(m.values[n])) * J[n];
    }
    return {integrate_density(m, density),
            two_pi * m.degree_target * N.moment_integral()};
}

namespace detail {

// d|w|/dt on the grid via the radial stencil applied to the sampled moduli.
inline std::vector<double> radial_modulus_derivative(const DiscreteMap& m) {
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    const double hx = m.grid.x_step();
    std::vector<double> out(m.values.size());
    std::vector<double> column(nr), dx(nr);
    for (int k = 0; k < nt; ++k) {
        for (int i = 0; i < nr; ++i) column[i] = std::abs(m.at(i, k));
        radial_x_derivative(column, dx, hx);
        for (int i = 0; i < nr; ++i) out[m.index(i, k)] = dx[i] / m.grid.radius(i);
    }
    return out;
}

}  // namespace detail

/// (c) Radial free Lagrangian: int A(|g|) (d|g|/dt) / |z| equals
/// 2 pi int_1^R A(s) ds by the fundamental theorem along rays, provided the
/// boundary moduli are exact.
inline LagrangianValue lagrangian_c(const DiscreteMap& m, const WeightTable& A) {
    const auto dmod = detail::radial_modulus_derivative(m);
    std::vector<double> density(m.values.size());
    const int nr = m.grid.n_radial;
    for (int i = 0; i < nr; ++i) {
        const double t = m.grid.radius(i);
        for (int k = 0; k < m.grid.n_angular; ++k) {
            const std::size_t n = m.index(i, k);
            density[n] = A(std::abs(m.values[n])) * dmod[n] / t;
        }
    }
    return {integrate_density(m, density), two_pi * A.integral()};
}

/// (d) Angular free Lagrangian: int B(|z|) Im[g_T / g] equals
/// 2 pi j int B(t) dt because each ring picks up the full 2 pi j argument
/// increment.
inline LagrangianValue lagrangian_d(const DiscreteMap& m, const WeightTable& B,
                                    const Differentials& d) {
    std::vector<double> density(m.values.size());
    const int nr = m.grid.n_radial;
    for (int i = 0; i < nr; ++i) {
        const double v = B(m.grid.radius(i));
        for (int k = 0; k < m.grid.n_angular; ++k) {
            const std::size_t n = m.index(i, k);
            const Complex w = m.values[n];
            if (std::abs(w) < 1e-9) {
                throw NonAdmissibleMap("lagrangian_d: sample too close to the origin");
            }
            density[n] = v * std::imag(d.g_T[n] / w);
        }
    }
    return {integrate_density(m, density),
            two_pi * m.degree_target * B.integral()};
}

// ---------------------------------------------------------------------------
// Subgradient certificate
// ---------------------------------------------------------------------------

/// Coefficients of the pointwise subgradient bound
///   |g_N|^2 + |g_T|^2 >= X(s) |g|_N / t + Y(t) (|g|/s) Im(g_T/g)
///                        + Z(s) det Dg + W(t),
/// evaluated at s = |g(z)|, t = |z|. The elastic family (c1 >= 0) uses
///   X = 2 c1 / sqrt(j^2 s^2 + c1),  Z = 2 j s / sqrt(j^2 s^2 + c1),
///   W = -c1 / t^2,                  Y = 0,
/// and the non-elastic family (c1 < 0)
///   Y = -2 c1 / (j t),  Z = 2 sqrt(j^2 s^2 + c1) / (j s),
///   W = c1 / t^2,       X = 0.
/// Equality holds exactly at the radial minimizer of the same c1.
struct SubgradientCoefficients {
    Regime regime;  // Elastic covers c1 >= 0 (conformal is the c1 = 0 limit)
    double c1;
    int j;
    DomainBand band;  // radial interval the certificate integrates over
    double target_R;

    double X(double s) const {
        if (regime == Regime::NonElastic) return 0.0;
        return 2.0 * c1 / root(s);
    }
    double Y(double t) const {
        if (regime != Regime::NonElastic) return 0.0;
        return -2.0 * c1 / (j * t);
    }
    double Z(double s) const {
        if (regime == Regime::NonElastic) return 2.0 * root(s) / (j * s);
        return 2.0 * j * s / root(s);
    }
    double W(double t) const {
        if (regime == Regime::NonElastic) return c1 / (t * t);
        return -c1 / (t * t);
    }

    double root(double s) const { return std::sqrt(std::max(0.0, j * j * s * s + c1)); }
};

inline SubgradientCoefficients subgradient_coefficients(const ProblemSpec& s) {
    validate(s);
    const DomainBand band = domain_band(s);
    if (is_above_bound(s)) {
        const RadialProfile p = solve_radial(s);
        const Regime reg = (p.regime == Regime::NonElastic) ? Regime::NonElastic : Regime::Elastic;
        return {reg, p.c1, s.j, band, s.R};
    }
    const RadialProfile p = critical_profile(s.j);
    return {Regime::NonElastic, p.c1, s.j, band, s.R};
}

/// Certified lower bound on the Dirichlet energy of every admissible map,
/// assembled from the closed-form aggregation of the four free Lagrangians
/// with the regime's coefficient functions. Analytically this equals the
/// closed-form minimum energy.
inline double lower_bound(const ProblemSpec& s) {
    const SubgradientCoefficients c = subgradient_coefficients(s);
    const double lo = c.band.lo;
    const double hi = c.band.hi;
    const double log_band = std::log(hi / lo);
    double total = 0.0;
    if (c.regime == Regime::NonElastic) {
        // (a) with M = W: 2 pi int t W dt = 2 pi c1 log(hi/lo)
        total += two_pi * c.c1 * log_band;
        // (b) with N = Z: 2 pi j int s Z ds = 4 pi int sqrt(j^2 s^2 + c1) ds
        total += 4.0 * pi *
                 (detail::antider_sqrt(c.target_R, c.c1, c.j) - detail::antider_sqrt(1.0, c.c1, c.j));
        // (d) with B = Y: 2 pi j int Y dt = -4 pi c1 log(hi/lo)
        total += -4.0 * pi * c.c1 * log_band;
    } else {
        // (a) with M = W: -2 pi c1 log r
        total += -two_pi * c.c1 * log_band;
        // (b) with N = Z: 4 pi j^2 int s^2 / sqrt(j^2 s^2 + c1) ds
        total += 4.0 * pi * c.j * c.j *
                 (detail::antider_s2_inv_sqrt(c.target_R, c.c1, c.j) -
                  detail::antider_s2_inv_sqrt(1.0, c.c1, c.j));
        // (c) with A = X: 4 pi c1 int 1 / sqrt(j^2 s^2 + c1) ds
        total += 4.0 * pi * c.c1 *
                 (detail::antider_inv_sqrt(c.target_R, c.c1, c.j) -
                  detail::antider_inv_sqrt(1.0, c.c1, c.j));
    }
    return total;
}

/// Values of the four Lagrangian integrals entering the certificate, the
/// certified value, the energy, their slack, and the worst pointwise
/// violation of the subgradient inequality (quadrature noise for admissible
/// maps, zero for analytic minimizer samples).
struct CertificateReport {
    LagrangianValue lagrangian_a;
    LagrangianValue lagrangian_b;
    LagrangianValue lagrangian_c;
    LagrangianValue lagrangian_d;
    double certified_value = 0.0;
    double energy = 0.0;
    double slack = 0.0;
    double max_pointwise_violation = 0.0;
};

/// Evaluate the subgradient certificate on a discrete map. The map must be
/// admissible for `s` and live on the problem's domain band.
inline CertificateReport certify(const DiscreteMap& m, const ProblemSpec& s) {
    const SubgradientCoefficients c = subgradient_coefficients(s);
    if (std::abs(m.grid.t_min - c.band.lo) > 1e-9 * c.band.lo ||
        std::abs(m.grid.t_max - c.band.hi) > 1e-9 * c.band.hi) {
        throw ConfigurationError("certify: grid does not cover the problem's domain band");
    }
    if (m.degree_target != s.j || std::abs(m.target_R - s.R) > 1e-12 * s.R) {
        throw ConfigurationError("certify: map targets a different problem");
    }

    const Differentials d = differentials(m);
    const auto J = jacobian(m, d);
    const auto dmod = detail::radial_modulus_derivative(m);

    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    std::vector<double> da(m.values.size()), db(m.values.size()), dc(m.values.size()),
        dd(m.values.size()), lhs_density(m.values.size());
    double max_violation = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double t = m.grid.radius(i);
        for (int k = 0; k < nt; ++k) {
            const std::size_t n = m.index(i, k);
            const Complex w = m.values[n];
            const double smod = std::abs(w);
            da[n] = c.W(t);
            db[n] = c.Z(smod) * J[n];
            dc[n] = c.X(smod) * dmod[n] / t;
            // s = |g(z)|, so the (|g|/s) factor of the template is 1.
            dd[n] = c.Y(t) * std::imag(d.g_T[n] / w);
            lhs_density[n] = std::norm(d.g_N[n]) + std::norm(d.g_T[n]);
            const double rhs = da[n] + db[n] + dc[n] + dd[n];
            max_violation = std::max(max_violation, rhs - lhs_density[n]);
        }
    }

    CertificateReport rep;
    rep.lagrangian_a = {integrate_density(m, da),
                        c.regime == Regime::NonElastic
                            ? two_pi * c.c1 * std::log(c.band.hi / c.band.lo)
                            : -two_pi * c.c1 * std::log(c.band.hi / c.band.lo)};
    rep.lagrangian_b = {integrate_density(m, db),
                        c.regime == Regime::NonElastic
                            ? 4.0 * pi * (detail::antider_sqrt(c.target_R, c.c1, c.j) -
                                          detail::antider_sqrt(1.0, c.c1, c.j))
                            : 4.0 * pi * c.j * c.j *
                                  (detail::antider_s2_inv_sqrt(c.target_R, c.c1, c.j) -
                                   detail::antider_s2_inv_sqrt(1.0, c.c1, c.j))};
    rep.lagrangian_c = {integrate_density(m, dc),
                        c.regime == Regime::NonElastic
                            ? 0.0
                            : 4.0 * pi * c.c1 *
                                  (detail::antider_inv_sqrt(c.target_R, c.c1, c.j) -
                                   detail::antider_inv_sqrt(1.0, c.c1, c.j))};
    rep.lagrangian_d = {integrate_density(m, dd),
                        c.regime == Regime::NonElastic
                            ? -4.0 * pi * c.c1 * std::log(c.band.hi / c.band.lo)
                            : 0.0};
    rep.certified_value = rep.lagrangian_a.lhs + rep.lagrangian_b.lhs + rep.lagrangian_c.lhs +
                          rep.lagrangian_d.lhs;
    rep.energy = integrate_density(m, lhs_density);
    rep.slack = rep.energy - rep.certified_value;
    rep.max_pointwise_violation = max_violation;
    return rep;
}

/// Residual of the regime's pointwise equality condition on analytic fields:
/// alpha(s) |g_N| - |g_T| in the elastic regime, beta(s) |g_T| - |g_N| in the
/// non-elastic one. Vanishes exactly at the radial minimizer.
inline double equality_diagnostic(const SubgradientCoefficients& c, const PolarFields& f) {
    const double s = f.abs_w;
    if (c.regime == Regime::NonElastic) {
        const double beta = c.root(s) / (c.j * s);
        return beta * std::abs(f.g_T) - std::abs(f.g_N);
    }
    const double alpha = c.j * s / c.root(s);
    return alpha * std::abs(f.g_N) - std::abs(f.g_T);
}

/// Subgradient integrand on analytic fields; the pointwise inequality
/// |g_N|^2 + |g_T|^2 >= this holds for arbitrary field values with
/// s = |g| in [1, R].
inline double subgradient_integrand(const SubgradientCoefficients& c, const PolarFields& f,
                                    double t) {
    const double s = f.abs_w;
    const double im_ratio = std::imag(f.g_T / f.w);
    return c.X(s) * f.d_abs_dt / t + c.Y(t) * (f.abs_w / s) * im_ratio + c.Z(s) * f.jacobian +
           c.W(t);
}

}  // namespace annuli
