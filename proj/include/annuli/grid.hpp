#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "annuli/common.hpp"
#include "annuli/parallel.hpp"
#include "annuli/problem.hpp"

namespace annuli {

class SamplingError : public std::runtime_error {
public:
    SamplingError(const std::string& what, int i, int k)
        : std::runtime_error(what + " at node (i=" + std::to_string(i) +
                             ", k=" + std::to_string(k) + ")"),
          radial_index(i),
          angular_index(k) {}
    int radial_index;
    int angular_index;
};

class NonAdmissibleMap : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class IllConditionedWinding : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Polar grid on the annulus t_min <= |z| <= t_max with log-spaced radial
/// nodes t_i = t_min (t_max/t_min)^{i/(n_radial-1)} and uniform angular
/// nodes tau_k = 2 pi k / n_angular (periodic). In the log radius
/// x = log t the radial nodes are uniform, which is the natural coordinate
/// for both the radial ODE and the Dirichlet energy.
struct PolarGrid {
    double t_min;
    double t_max;
    int n_radial;
    int n_angular;

    PolarGrid(double tmin, double tmax, int nr, int nt)
        : t_min(tmin), t_max(tmax), n_radial(nr), n_angular(nt) {
        if (!(tmin > 0.0) || !(tmax > tmin)) {
            throw std::invalid_argument("PolarGrid requires 0 < t_min < t_max");
        }
        if (nr < 3 || nt < 8) {
            throw std::invalid_argument("PolarGrid requires n_radial >= 3, n_angular >= 8");
        }
    }

    double x_min() const { return std::log(t_min); }
    double x_step() const { return std::log(t_max / t_min) / (n_radial - 1); }
    double tau_step() const { return two_pi / n_angular; }

    double radius(int i) const {
        if (i == 0) return t_min;
        if (i == n_radial - 1) return t_max;
        return t_min * std::pow(t_max / t_min, static_cast<double>(i) / (n_radial - 1));
    }
    double angle(int k) const { return tau_step() * k; }

    std::size_t node_count() const {
        return static_cast<std::size_t>(n_radial) * static_cast<std::size_t>(n_angular);
    }
};

/// Complex image samples w_{i,k} of a candidate map on a polar grid,
/// radial-major: values[i * n_angular + k].
struct DiscreteMap {
    PolarGrid grid;
    std::vector<Complex> values;
    double target_R;
    int degree_target;

    DiscreteMap(const PolarGrid& g, double R, int j)
        : grid(g), values(g.node_count()), target_R(R), degree_target(j) {}

    std::size_t index(int i, int k) const {
        return static_cast<std::size_t>(i) * grid.n_angular + k;
    }
    Complex& at(int i, int k) { return values[index(i, k)]; }
    const Complex& at(int i, int k) const { return values[index(i, k)]; }
};

/// Admissibility tolerances: boundary rows must hit their circles to
/// boundary_tol; interior moduli may drift outside [1, R] by interior_tol
/// (optimizer iterates touch the shell from outside before projection).
struct AdmissibilityTolerances {
    double boundary_tol = 1e-9;
    double interior_tol = 1e-6;
};

struct AdmissibilityReport {
    bool admissible = true;
    double max_inner_boundary_dev = 0.0;  // max | |w_{0,k}| - 1 |
    double max_outer_boundary_dev = 0.0;  // max | |w_{n-1,k}| - R |
    double min_modulus = 0.0;
    double max_modulus = 0.0;
    bool windings_consistent = true;
    int winding = 0;  // common boundary-row winding when consistent
    std::string violation;
};

/// Winding number of grid row `row` about the origin: the sum of
/// principal-branch argument increments along the (periodic) row, divided
/// by 2 pi. Exact for rows whose consecutive samples never jump by pi or
/// more. Throws IllConditionedWinding when a sample is too close to the
/// origin for the argument to be trustworthy.
inline int winding_number(const DiscreteMap& m, int row) {
    if (row < 0 || row >= m.grid.n_radial) {
        throw std::out_of_range("winding_number: row index out of range");
    }
    const int nt = m.grid.n_angular;
    double total = 0.0;
    for (int k = 0; k < nt; ++k) {
        const Complex a = m.at(row, k);
        const Complex b = m.at(row, (k + 1) % nt);
        if (std::abs(a) < 1e-9 || std::abs(b) < 1e-9) {
            throw IllConditionedWinding("winding_number: sample too close to the origin");
        }
        total += std::arg(b / a);
    }
    const double w = total / two_pi;
    return static_cast<int>(std::lround(w));
}

inline AdmissibilityReport check_admissibility(const DiscreteMap& m,
                                               const AdmissibilityTolerances& tol = {}) {
    AdmissibilityReport rep;
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    double min_mod = std::abs(m.values[0]);
    double max_mod = min_mod;
    for (int i = 0; i < nr; ++i) {
        for (int k = 0; k < nt; ++k) {
            const double a = std::abs(m.at(i, k));
            min_mod = std::min(min_mod, a);
            max_mod = std::max(max_mod, a);
            if (i == 0) {
                rep.max_inner_boundary_dev = std::max(rep.max_inner_boundary_dev,
                                                      std::abs(a - 1.0));
            }
            if (i == nr - 1) {
                rep.max_outer_boundary_dev = std::max(rep.max_outer_boundary_dev,
                                                      std::abs(a - m.target_R));
            }
        }
    }
    rep.min_modulus = min_mod;
    rep.max_modulus = max_mod;
    if (rep.max_inner_boundary_dev > tol.boundary_tol) {
        rep.admissible = false;
        rep.violation = "inner boundary row off the unit circle";
    } else if (rep.max_outer_boundary_dev > tol.boundary_tol) {
        rep.admissible = false;
        rep.violation = "outer boundary row off the target circle";
    } else if (min_mod < 1.0 - tol.interior_tol || max_mod > m.target_R + tol.interior_tol) {
        rep.admissible = false;
        rep.violation = "image leaves the closed target annulus";
    }
    if (!rep.admissible) return rep;  // moduli already off; windings may be unreliable
    const int w0 = winding_number(m, 0);
    const int w1 = winding_number(m, nr - 1);
    rep.windings_consistent = (w0 == w1);
    rep.winding = w0;
    if (!rep.windings_consistent) {
        rep.admissible = false;
        rep.violation = "boundary rows wind differently";
    } else if (w0 != m.degree_target) {
        rep.admissible = false;
        rep.violation = "boundary winding differs from the target degree";
    }
    return rep;
}

/// Sample a map f on the grid and verify admissibility for the class of
/// degree-j maps onto A(1, R). Throws SamplingError with the offending node
/// on evaluation failure or invariant breach.
inline DiscreteMap sample_map(const std::function<Complex(Complex)>& f, const PolarGrid& grid,
                              double R, int j, const AdmissibilityTolerances& tol = {}) {
    if (grid.n_angular < 4 * j) {
        throw std::invalid_argument(
            "sample_map: n_angular must be at least 4*j to resolve the winding");
    }
    DiscreteMap m(grid, R, j);
    // Evaluation failures inside worker threads are recorded per row and
    // rethrown as SamplingError afterwards.
    std::vector<int> failed_at(grid.n_radial, -1);
    parallel_for(grid.n_radial, [&](std::size_t i) {
        for (int k = 0; k < grid.n_angular; ++k) {
            const Complex z = std::polar(grid.radius(static_cast<int>(i)), grid.angle(k));
            try {
                m.at(static_cast<int>(i), k) = f(z);
            } catch (...) {
                failed_at[i] = k;
                return;
            }
        }
    });
    for (int i = 0; i < grid.n_radial; ++i) {
        if (failed_at[i] >= 0) {
            throw SamplingError("sample_map: map evaluation failed", i, failed_at[i]);
        }
        for (int k = 0; k < grid.n_angular; ++k) {
            const Complex w = m.at(i, k);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                throw SamplingError("sample_map: non-finite value", i, k);
            }
        }
    }
    const auto rep = check_admissibility(m, tol);
    if (!rep.admissible) {
        throw SamplingError("sample_map: " + rep.violation, 0, 0);
    }
    return m;
}

}  // namespace annuli
