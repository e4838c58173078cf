#pragma once

// Umbrella header for the annuli library: closed-form Dirichlet-energy
// minimizers between circular annuli, discrete polar-grid energies, a
// constrained minimizer, and free-Lagrangian lower-bound certificates.

#include "annuli/certificates.hpp"
#include "annuli/common.hpp"
#include "annuli/grid.hpp"
#include "annuli/io.hpp"
#include "annuli/minimizer.hpp"
#include "annuli/operators.hpp"
#include "annuli/optimize.hpp"
#include "annuli/problem.hpp"
#include "annuli/radial_profile.hpp"
#include "annuli/sampling.hpp"
#include "annuli/svg.hpp"
