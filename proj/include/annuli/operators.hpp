#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "annuli/grid.hpp"
#include "annuli/parallel.hpp"

namespace annuli {

/// Polar differential fields on the grid nodes:
///   g_N = d g / dt        (radial derivative)
///   g_T = (1/t) d g / dtau (tangential derivative)
/// Radial differences are centered in the log radius x = log t (the nodes
/// are uniform there), with one-sided second-order stencils at the boundary
/// rows; angular differences are centered with periodic wrap. Both are
/// second-order accurate on smooth inputs.
struct Differentials {
    std::vector<Complex> g_N;
    std::vector<Complex> g_T;
};

namespace detail {

// Second-order derivative in x along one radial column: centered interior,
// one-sided three-point stencils at the ends.
template <typename T>
inline void radial_x_derivative(const std::vector<T>& column, std::vector<T>& out, double hx) {
    const int nr = static_cast<int>(column.size());
    out[0] = (-3.0 * column[0] + 4.0 * column[1] - column[2]) / (2.0 * hx);
    for (int i = 1; i < nr - 1; ++i) {
        out[i] = (column[i + 1] - column[i - 1]) / (2.0 * hx);
    }
    out[nr - 1] = (3.0 * column[nr - 1] - 4.0 * column[nr - 2] + column[nr - 3]) / (2.0 * hx);
}

}  // namespace detail

inline Differentials differentials(const DiscreteMap& m) {
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    const double hx = m.grid.x_step();
    const double htau = m.grid.tau_step();
    Differentials d;
    d.g_N.resize(m.values.size());
    d.g_T.resize(m.values.size());
    parallel_for(nt, [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        std::vector<Complex> column(nr), dx(nr);
        for (int i = 0; i < nr; ++i) column[i] = m.at(i, k);
        detail::radial_x_derivative(column, dx, hx);
        for (int i = 0; i < nr; ++i) {
            d.g_N[m.index(i, k)] = dx[i] / m.grid.radius(i);
        }
    });
    parallel_for(nr, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const double t = m.grid.radius(i);
        for (int k = 0; k < nt; ++k) {
            const Complex right = m.at(i, (k + 1) % nt);
            const Complex left = m.at(i, (k + nt - 1) % nt);
            d.g_T[m.index(i, k)] = (right - left) / (2.0 * htau * t);
        }
    });
    return d;
}

/// Pointwise Jacobian det Dg = Im(g_T conj(g_N)).
inline std::vector<double> jacobian(const DiscreteMap& m, const Differentials& d) {
    std::vector<double> J(m.values.size());
    parallel_for(m.values.size(), [&](std::size_t n) {
        J[n] = std::imag(d.g_T[n] * std::conj(d.g_N[n]));
    });
    return J;
}

inline std::vector<double> jacobian(const DiscreteMap& m) {
    return jacobian(m, differentials(m));
}

/// Trapezoidal quadrature of a per-node density f against the area measure
/// t dt dtau = t^2 dx dtau: half weights at the radial boundary rows, full
/// periodic weights in the angle. Partial sums are accumulated per radial
/// row and combined in row order, so the result does not depend on the
/// worker count.
inline double integrate_density(const DiscreteMap& m, const std::vector<double>& density) {
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    const double cell = m.grid.x_step() * m.grid.tau_step();
    std::vector<double> row_sum(nr, 0.0);
    parallel_for(nr, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const double t = m.grid.radius(i);
        const double w = (i == 0 || i == nr - 1) ? 0.5 : 1.0;
        double s = 0.0;
        for (int k = 0; k < nt; ++k) s += density[m.index(i, k)];
        row_sum[i] = s * w * t * t * cell;
    });
    double total = 0.0;
    for (int i = 0; i < nr; ++i) total += row_sum[i];
    return total;
}

/// Discrete Dirichlet energy: quadrature of |g_N|^2 + |g_T|^2 over the
/// annulus. Converges O(h^2) to the continuum energy for smooth maps.
inline double dirichlet_energy(const DiscreteMap& m, const Differentials& d) {
    std::vector<double> density(m.values.size());
    parallel_for(m.values.size(), [&](std::size_t n) {
        density[n] = std::norm(d.g_N[n]) + std::norm(d.g_T[n]);
    });
    return integrate_density(m, density);
}

inline double dirichlet_energy(const DiscreteMap& m) {
    return dirichlet_energy(m, differentials(m));
}

// ---------------------------------------------------------------------------
// Topological degree
// ---------------------------------------------------------------------------

struct DegreeOptions {
    int regular_samples = 5;    // regular values y to cross-check against
    int max_resample = 64;      // retries when a sampled y is not regular
    std::uint64_t seed = 0x5eed5eedULL;
    double degeneracy_tol = 1e-9;  // reject cells with |Jacobian| below this
};

namespace detail {

inline double cross2(Complex a, Complex b) {
    return a.real() * b.imag() - a.imag() * b.real();
}

// Signed containment of y in triangle (p0, p1, p2): +1 / -1 for strict
// containment with the corresponding orientation, 0 for clearly outside,
// 2 when the decision is ambiguous (y within tol of an edge line, or the
// triangle is degenerate near y) and the caller should resample y.
inline int triangle_sign(Complex p0, Complex p1, Complex p2, Complex y, double tol) {
    const double area2 = cross2(p1 - p0, p2 - p0);
    const double d0 = cross2(p1 - p0, y - p0);
    const double d1 = cross2(p2 - p1, y - p1);
    const double d2 = cross2(p0 - p2, y - p2);
    if (d0 > tol && d1 > tol && d2 > tol && area2 > tol) return 1;
    if (d0 < -tol && d1 < -tol && d2 < -tol && area2 < -tol) return -1;
    const bool near_inside = (d0 >= -tol && d1 >= -tol && d2 >= -tol) ||
                             (d0 <= tol && d1 <= tol && d2 <= tol);
    return near_inside ? 2 : 0;
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Signed preimage count of a regular value y over the image cells: each
/// grid quad is split into two triangles and contributes the orientation
/// sign of every triangle strictly containing y. Returns the count, or
/// nullopt-style failure via the `ok` flag when y is not regular for this
/// grid (degenerate or boundary hit).
inline bool signed_preimage_count(const DiscreteMap& m, Complex y, double tol, int& count) {
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    int total = 0;
    for (int i = 0; i < nr - 1; ++i) {
        for (int k = 0; k < nt; ++k) {
            const int k1 = (k + 1) % nt;
            const Complex w00 = m.at(i, k);
            const Complex w01 = m.at(i, k1);
            const Complex w10 = m.at(i + 1, k);
            const Complex w11 = m.at(i + 1, k1);
            // Positively oriented split of the domain cell
            // (t_i, tau_k) -> (t_{i+1}, tau_k) -> (t_{i+1}, tau_{k+1}) -> (t_i, tau_{k+1}).
            const int s1 = detail::triangle_sign(w00, w10, w11, y, tol);
            const int s2 = detail::triangle_sign(w00, w11, w01, y, tol);
            if (s1 == 2 || s2 == 2) return false;
            total += s1 + s2;
        }
    }
    count = total;
    return true;
}

/// Estimate of the topological degree: all row windings must agree, and the
/// signed preimage count of sampled regular values must reproduce the same
/// integer. Throws NonAdmissibleMap on any inconsistency.
inline int degree_estimate(const DiscreteMap& m, const DegreeOptions& opt = {}) {
    const int nr = m.grid.n_radial;
    const int expected = winding_number(m, 0);
    for (int i = 1; i < nr; ++i) {
        if (winding_number(m, i) != expected) {
            throw NonAdmissibleMap("degree_estimate: row windings disagree");
        }
    }
    std::mt19937_64 rng(opt.seed);
    const double margin = 0.05 * (m.target_R - 1.0);
    int verified = 0;
    int attempts = 0;
    while (verified < opt.regular_samples) {
        if (++attempts > opt.regular_samples + opt.max_resample) {
            throw NonAdmissibleMap("degree_estimate: could not find enough regular values");
        }
        const double s = 1.0 + margin + (m.target_R - 1.0 - 2.0 * margin) * detail::uniform01(rng);
        const double phi = two_pi * detail::uniform01(rng);
        const Complex y = std::polar(s, phi);
        int count = 0;
        if (!signed_preimage_count(m, y, opt.degeneracy_tol, count)) continue;  // resample
        if (count != expected) {
            throw NonAdmissibleMap("degree_estimate: regular-value count disagrees with winding");
        }
        ++verified;
    }
    return expected;
}

}  // namespace annuli
