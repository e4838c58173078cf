// Minimal library walkthrough: solve a problem in closed form, sample the
// minimizer on a grid, and compare the discrete energy with the formula.

#include <cstdio>

#include "annuli/annuli.hpp"

int main() {
    using namespace annuli;

    // Map the annulus A(1/2, 2) onto A(1, 17/8) with degree 2: the fat
    // domain violates the existence bound, so the minimizer squeezes
    // A(1/2, 1) onto the unit circle and is harmonic outside it.
    const ProblemSpec spec = normalize_problem(0.5, 2.0, 1.0, 17.0 / 8.0, 2);
    std::printf("bound rhs: %.6f, above bound: %s\n", nitsche_rhs(spec.r, spec.j),
                is_above_bound(spec) ? "yes" : "no");

    const auto energy = energy_closed(spec);
    std::printf("closed-form minimum energy: %.12f\n", energy.value);
    std::printf("certified lower bound:      %.12f\n", lower_bound(spec));

    const DomainBand band = domain_band(spec);
    const PolarGrid grid(band.lo, band.hi, 128, 256);
    const DiscreteMap m = sample_g_diamond(spec, grid);
    std::printf("discrete energy (128x256):  %.12f\n", dirichlet_energy(m));
    std::printf("degree estimate: %d\n", degree_estimate(m));
    return 0;
}
