#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "annuli/grid.hpp"
#include "annuli/minimizer.hpp"
#include "annuli/operators.hpp"
#include "annuli/problem.hpp"

namespace annuli {

struct OptimizerConfig {
    int max_iters = 8000;
    double step0 = 1.0;           // initial line-search step
    double backtrack = 0.5;       // step reduction factor, in (0,1)
    double tol_grad = 0.0;        // 0 = auto: 1e-6 * sqrt(node count)
    double tol_energy = 1e-10;    // relative energy-change tolerance
    double projection_tol = 1e-9; // active-set detection tolerance
    std::uint64_t seed = 0;

    void validate_config() const {
        if (max_iters < 1 || !(step0 > 0.0) || !(backtrack > 0.0) || !(backtrack < 1.0) ||
            tol_grad < 0.0 || !(tol_energy > 0.0) || !(projection_tol > 0.0)) {
            throw std::invalid_argument("OptimizerConfig: invalid parameter");
        }
    }
};

struct ConvergenceReport {
    int iterations = 0;
    double energy = 0.0;         // O(h^2) quadrature energy of the final map
    double oracle_energy = 0.0;  // closed-form minimum for the problem
    double gap_rel = 0.0;
    double active_fraction = 0.0;  // fraction of nodes pinned at |w| = 1
    std::vector<double> trace;     // internal objective per iteration, non-increasing
    bool converged = false;
    bool winding_conserved = true;
};

enum class InitMode { RadialInterp, PowerMap, Perturbed };

namespace detail {

// ------------------------------------------------------------------
// Internal discrete objective.
//
// In the log-polar coordinates (x, tau) the Dirichlet energy is the flat
// one, int (|w_x|^2 + |w_tau|^2) dx dtau. The optimizer works with its
// forward-difference discretization
//   E_h = (htau/hx) sum |w(i+1,k) - w(i,k)|^2
//       + (hx/htau) sum omega_i |w(i,k+1) - w(i,k)|^2
// (trapezoid weights omega in the radial direction), whose interior
// stationarity condition is the classic 5-point Laplace stencil. The
// reported energies use the centered-difference quadrature of
// operators.hpp; both converge O(h^2) to the continuum value.
// ------------------------------------------------------------------

inline double objective(const DiscreteMap& m) {
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    const double cx = m.grid.tau_step() / m.grid.x_step();
    const double ct = m.grid.x_step() / m.grid.tau_step();
    double sr = 0.0, st = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double w = (i == 0 || i == nr - 1) ? 0.5 : 1.0;
        double row_t = 0.0;
        for (int k = 0; k < nt; ++k) {
            if (i + 1 < nr) sr += std::norm(m.at(i + 1, k) - m.at(i, k));
            row_t += std::norm(m.at(i, (k + 1) % nt) - m.at(i, k));
        }
        st += w * row_t;
    }
    return cx * sr + ct * st;
}

inline std::vector<Complex> objective_gradient(const DiscreteMap& m) {
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    const double cx = m.grid.tau_step() / m.grid.x_step();
    const double ct = m.grid.x_step() / m.grid.tau_step();
    std::vector<Complex> g(m.values.size(), Complex(0.0, 0.0));
    for (int i = 0; i < nr; ++i) {
        const double w = (i == 0 || i == nr - 1) ? 0.5 : 1.0;
        for (int k = 0; k < nt; ++k) {
            const std::size_t n = m.index(i, k);
            Complex acc(0.0, 0.0);
            if (i + 1 < nr) acc += cx * (m.at(i, k) - m.at(i + 1, k));
            if (i > 0) acc += cx * (m.at(i, k) - m.at(i - 1, k));
            acc += ct * w * (2.0 * m.at(i, k) - m.at(i, (k + 1) % nt) - m.at(i, (k + nt - 1) % nt));
            g[n] = 2.0 * acc;
        }
    }
    return g;
}

// In-place radix-2 FFT for power-of-two sizes; naive DFT fallback keeps
// odd sizes exact at O(n^2).
inline void fft(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0) return;
    if ((n & (n - 1)) != 0) {
        std::vector<Complex> out(n, Complex(0.0, 0.0));
        const double sign = inverse ? 1.0 : -1.0;
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t k = 0; k < n; ++k) {
                out[m] += a[k] * std::polar(1.0, sign * two_pi * m * k / n);
            }
        }
        a = std::move(out);
    } else {
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const double ang = (inverse ? 1.0 : -1.0) * two_pi / len;
            const Complex wl = std::polar(1.0, ang);
            for (std::size_t i = 0; i < n; i += len) {
                Complex w(1.0, 0.0);
                for (std::size_t k = 0; k < len / 2; ++k) {
                    const Complex u = a[i + k];
                    const Complex v = a[i + k + len / 2] * w;
                    a[i + k] = u + v;
                    a[i + k + len / 2] = u - v;
                    w *= wl;
                }
            }
        }
    }
    if (inverse) {
        for (auto& v : a) v /= static_cast<double>(n);
    }
}

// Project onto the closed shell 1 <= |w| <= R.
inline Complex shell_project(Complex w, double R) {
    const double a = std::abs(w);
    if (a < 1.0) {
        if (a == 0.0) {
            throw std::domain_error("shell projection undefined at the origin");
        }
        return w / a;
    }
    if (a > R) return w * (R / a);
    return w;
}

}  // namespace detail

/// Admissible starting maps for the minimization.
///   radial_interp: e^{ij tau} (1 + (R-1)(t - t_min)/(t_max - t_min))
///   power_map:     z^j with the modulus rescaled affinely onto [1, R]
///   perturbed:     radial_interp with seeded smooth angular noise in both
///                  modulus and phase, re-projected to admissibility
inline DiscreteMap initialize(const ProblemSpec& s, const PolarGrid& grid, InitMode mode,
                              std::uint64_t seed = 0) {
    validate(s);
    if (grid.n_angular < 4 * s.j) {
        throw std::invalid_argument("initialize: n_angular must be at least 4*j");
    }
    const double R = s.R;
    DiscreteMap m(grid, R, s.j);
    const double span = grid.t_max - grid.t_min;
    auto radial_interp = [&](double t) { return 1.0 + (R - 1.0) * (t - grid.t_min) / span; };

    if (mode == InitMode::RadialInterp || mode == InitMode::Perturbed) {
        for (int i = 0; i < grid.n_radial; ++i) {
            const double mu = radial_interp(grid.radius(i));
            for (int k = 0; k < grid.n_angular; ++k) {
                m.at(i, k) = std::polar(mu, s.j * grid.angle(k));
            }
        }
    } else {
        const double tjmin = std::pow(grid.t_min, s.j);
        const double tjspan = std::pow(grid.t_max, s.j) - tjmin;
        for (int i = 0; i < grid.n_radial; ++i) {
            const double tj = std::pow(grid.radius(i), s.j);
            const double mu = 1.0 + (R - 1.0) * (tj - tjmin) / tjspan;
            for (int k = 0; k < grid.n_angular; ++k) {
                m.at(i, k) = std::polar(mu, s.j * grid.angle(k));
            }
        }
    }

    if (mode == InitMode::Perturbed) {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        auto uni = [&rng] { return detail::uniform01(rng); };
        // A few low angular harmonics with random amplitudes and phases,
        // faded out at the boundary rows for the modulus part.
        const int modes = 3;
        std::vector<double> amp_mod(modes), ph_mod(modes), amp_arg(modes), ph_arg(modes);
        for (int p = 0; p < modes; ++p) {
            amp_mod[p] = 0.05 * (R - 1.0) * (2.0 * uni() - 1.0);
            ph_mod[p] = two_pi * uni();
            amp_arg[p] = 0.04 / (p + 1) * (2.0 * uni() - 1.0);
            ph_arg[p] = two_pi * uni();
        }
        const double x0 = grid.x_min();
        const double x1 = std::log(grid.t_max);
        for (int i = 0; i < grid.n_radial; ++i) {
            const double x = std::log(grid.radius(i));
            const double bump = std::sin(pi * (x - x0) / (x1 - x0));  // 0 at both rows
            for (int k = 0; k < grid.n_angular; ++k) {
                const double tau = grid.angle(k);
                double dmu = 0.0, darg = 0.0;
                for (int p = 0; p < modes; ++p) {
                    dmu += amp_mod[p] * std::sin((p + 1) * tau + ph_mod[p]);
                    darg += amp_arg[p] * std::sin((p + 1) * tau + ph_arg[p]);
                }
                const Complex w = m.at(i, k);
                const double mu = std::abs(w) + bump * bump * dmu;
                // Phase noise everywhere (boundary rows included: sliding
                // along the boundary circles stays admissible).
                m.at(i, k) = std::polar(mu, std::arg(w) + darg);
            }
        }
        // Re-project to admissibility: exact moduli on the boundary rows,
        // shell clamp inside.
        for (int k = 0; k < grid.n_angular; ++k) {
            m.at(0, k) = m.at(0, k) / std::abs(m.at(0, k));
            m.at(grid.n_radial - 1, k) =
                m.at(grid.n_radial - 1, k) * (R / std::abs(m.at(grid.n_radial - 1, k)));
        }
        for (int i = 1; i < grid.n_radial - 1; ++i) {
            for (int k = 0; k < grid.n_angular; ++k) {
                m.at(i, k) = detail::shell_project(m.at(i, k), R);
            }
        }
    }
    return m;
}

/// Replace the interior by the exact minimizer of the internal quadratic
/// objective with the current boundary rows held fixed (the discrete
/// Laplace system in log-polar coordinates, solved per angular Fourier
/// mode by a tridiagonal factorization), then clamp moduli onto [1, R].
/// The step is kept only if it does not increase the objective, so the
/// energy trace stays monotone even when the clamp is active.
inline DiscreteMap harmonic_interior_step(const DiscreteMap& m) {
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    if (nr < 3) return m;
    const double hx = m.grid.x_step();
    const double htau = m.grid.tau_step();

    std::vector<Complex> inner(nt), outer(nt);
    for (int k = 0; k < nt; ++k) {
        inner[k] = m.at(0, k);
        outer[k] = m.at(nr - 1, k);
    }
    detail::fft(inner, false);
    detail::fft(outer, false);

    // Per mode: (1/hx^2)(u_{i-1} - 2 u_i + u_{i+1}) - lambda_m u_i = 0,
    // lambda_m = (2 - 2 cos(2 pi m / nt)) / htau^2, Dirichlet data from the
    // transformed boundary rows. Modes are stored flat, mode-major.
    const int interior = nr - 2;
    std::vector<Complex> modes(static_cast<std::size_t>(nt) * interior);
    const double inv_hx2 = 1.0 / (hx * hx);
    std::vector<double> cprime(interior);
    std::vector<Complex> dprime(interior);
    for (int mIdx = 0; mIdx < nt; ++mIdx) {
        const double lambda = (2.0 - 2.0 * std::cos(two_pi * mIdx / nt)) / (htau * htau);
        const double b = -2.0 * inv_hx2 - lambda;
        // Thomas algorithm; off-diagonals all inv_hx2, rhs nonzero only at
        // the two rows adjacent to the boundaries.
        cprime[0] = inv_hx2 / b;
        dprime[0] = -inv_hx2 * inner[mIdx] / b;
        for (int i = 1; i < interior; ++i) {
            const double denom = b - inv_hx2 * cprime[i - 1];
            const Complex rhs = (i == interior - 1) ? -inv_hx2 * outer[mIdx] : Complex(0.0, 0.0);
            cprime[i] = inv_hx2 / denom;
            dprime[i] = (rhs - inv_hx2 * dprime[i - 1]) / denom;
        }
        Complex* u = modes.data() + static_cast<std::size_t>(mIdx) * interior;
        u[interior - 1] = dprime[interior - 1];
        for (int i = interior - 2; i >= 0; --i) {
            u[i] = dprime[i] - cprime[i] * u[i + 1];
        }
    }

    DiscreteMap out = m;
    std::vector<Complex> row(nt);
    for (int i = 0; i < interior; ++i) {
        for (int mIdx = 0; mIdx < nt; ++mIdx) {
            row[mIdx] = modes[static_cast<std::size_t>(mIdx) * interior + i];
        }
        detail::fft(row, true);
        for (int k = 0; k < nt; ++k) {
            out.at(i + 1, k) = detail::shell_project(row[k], m.target_R);
        }
    }
    return detail::objective(out) <= detail::objective(m) ? out : m;
}

struct GradientStepResult {
    DiscreteMap map;
    double step_taken = 0.0;
    bool stationary = false;       // line search underflowed: no descent found
    double projected_residual = 0.0;
};

/// One projected descent step on the internal objective. Boundary nodes
/// move only along their circles; interior nodes move freely and are then
/// projected onto the shell 1 <= |w| <= R. Backtracking guarantees descent,
/// and a step that changes a boundary winding is rejected with a halved
/// step. Emits the norm of the active-set-projected gradient for the
/// stopping test.
inline GradientStepResult projected_gradient_step(const DiscreteMap& m,
                                                  const OptimizerConfig& cfg,
                                                  double step_hint = 0.0) {
    cfg.validate_config();
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    const double R = m.target_R;
    const auto grad = detail::objective_gradient(m);

    std::vector<Complex> dir(grad.size());
    double residual_sq = 0.0;
    for (int i = 0; i < nr; ++i) {
        const bool boundary = (i == 0 || i == nr - 1);
        for (int k = 0; k < nt; ++k) {
            const std::size_t n = m.index(i, k);
            const Complex w = m.values[n];
            Complex d = -grad[n];
            if (boundary) {
                const Complex tangent = Complex(0.0, 1.0) * w / std::abs(w);
                const double comp = d.real() * tangent.real() + d.imag() * tangent.imag();
                d = comp * tangent;
                residual_sq += comp * comp;
            } else {
                const double a = std::abs(w);
                const Complex normal = w / a;
                const double radial = d.real() * normal.real() + d.imag() * normal.imag();
                const bool active_inner =
                    std::abs(a - 1.0) <= cfg.projection_tol && radial < 0.0;
                const bool active_outer = std::abs(a - R) <= cfg.projection_tol && radial > 0.0;
                if (active_inner || active_outer) {
                    const Complex feasible = d - radial * normal;
                    residual_sq += std::norm(feasible);
                } else {
                    residual_sq += std::norm(d);
                }
            }
            dir[n] = d;
        }
    }

    GradientStepResult res{m, 0.0, false, std::sqrt(residual_sq)};
    const double e0 = detail::objective(m);
    double step = (step_hint > 0.0) ? step_hint : cfg.step0;
    const double min_step = 1e-16 * cfg.step0;
    DiscreteMap trial = m;
    while (step >= min_step) {
        double moved_sq = 0.0;
        for (int k = 0; k < nt; ++k) {
            Complex w = m.at(0, k) + step * dir[m.index(0, k)];
            trial.at(0, k) = w / std::abs(w);
            moved_sq += std::norm(trial.at(0, k) - m.at(0, k));
            w = m.at(nr - 1, k) + step * dir[m.index(nr - 1, k)];
            trial.at(nr - 1, k) = w * (R / std::abs(w));
            moved_sq += std::norm(trial.at(nr - 1, k) - m.at(nr - 1, k));
        }
        for (int i = 1; i < nr - 1; ++i) {
            for (int k = 0; k < nt; ++k) {
                const std::size_t n = m.index(i, k);
                trial.values[n] = detail::shell_project(m.values[n] + step * dir[n], R);
                moved_sq += std::norm(trial.values[n] - m.values[n]);
            }
        }
        const double e1 = detail::objective(trial);
        const bool decreased = e1 <= e0 - 1e-4 * moved_sq / std::max(step, 1e-300);
        if (decreased && moved_sq > 0.0) {
            if (winding_number(trial, 0) != m.degree_target ||
                winding_number(trial, nr - 1) != m.degree_target) {
                step *= cfg.backtrack;  // winding change: reject and halve
                continue;
            }
            res.map = std::move(trial);
            res.step_taken = step;
            return res;
        }
        step *= cfg.backtrack;
    }
    res.stationary = true;
    return res;
}

/// Called after every outer iteration with the accepted iterate.
using IterateObserver = std::function<void(const DiscreteMap&, int iter)>;

/// Minimize the discrete Dirichlet energy over admissible degree-j maps by
/// alternating the exact interior relaxation with projected descent steps.
/// Stops when both the relative energy change and the projected gradient
/// norm fall below their tolerances.
inline std::pair<DiscreteMap, ConvergenceReport> minimize(const ProblemSpec& s,
                                                          const PolarGrid& grid,
                                                          const OptimizerConfig& cfg,
                                                          InitMode mode = InitMode::RadialInterp,
                                                          const IterateObserver& observer = {}) {
    cfg.validate_config();
    DiscreteMap m = initialize(s, grid, mode, cfg.seed);
    const double tol_grad =
        cfg.tol_grad > 0.0 ? cfg.tol_grad : 1e-6 * std::sqrt(static_cast<double>(grid.node_count()));

    ConvergenceReport rep;
    double e_prev = detail::objective(m);
    rep.trace.push_back(e_prev);
    double step_hint = cfg.step0;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        m = harmonic_interior_step(m);
        // The entry residual of the descent step is measured at the
        // interior-relaxed point, where it is a clean KKT measure.
        auto stepres = projected_gradient_step(m, cfg, step_hint);
        const double residual = stepres.projected_residual;
        if (!stepres.stationary) {
            m = std::move(stepres.map);
            step_hint = std::min(cfg.step0, stepres.step_taken * 1.1);
        }
        const double e_now = detail::objective(m);
        rep.trace.push_back(e_now);
        rep.iterations = iter;
        if (winding_number(m, 0) != s.j || winding_number(m, grid.n_radial - 1) != s.j) {
            rep.winding_conserved = false;  // cannot happen for accepted steps
        }
        if (observer) observer(m, iter);
        const bool energy_settled = std::abs(e_prev - e_now) <= cfg.tol_energy * std::max(e_now, 1e-300);
        const bool grad_settled = residual <= tol_grad || stepres.stationary;
        e_prev = e_now;
        if (energy_settled && grad_settled) {
            rep.converged = true;
            break;
        }
    }

    rep.energy = dirichlet_energy(m);
    rep.oracle_energy = energy_closed(s).value;
    rep.gap_rel = std::abs(rep.energy - rep.oracle_energy) / rep.oracle_energy;
    std::size_t active = 0;
    for (const Complex& w : m.values) {
        if (std::abs(std::abs(w) - 1.0) <= cfg.projection_tol) ++active;
    }
    rep.active_fraction = static_cast<double>(active) / static_cast<double>(m.values.size());
    return {std::move(m), rep};
}

}  // namespace annuli
