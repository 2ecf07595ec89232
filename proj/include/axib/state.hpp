#pragma once

#include <vector>

#include "axib/grid.hpp"

namespace axib {

// One snapshot of the coupled system. The solver evolves (omega, rho) and
// derives rho_tilde = r * rho algebraically; rho_tilde is kept as a checked
// redundancy (its own integral equation is used only as a residual check).
struct State {
    double t = 0.0;
    ScalarField omega;      // PLANAR
    ScalarField rho_tilde;  // PLANAR, = r * rho nodewise
    ScalarField rho;        // AXISYM
};

// Builds the redundant component from rho and stamps the time.
State make_state(double t, const ScalarField& omega, const ScalarField& rho);

// Largest nodewise mismatch of rho_tilde against r * rho, relative to
// max |rho_tilde| (0 for the zero state).
double state_compat_error(const State& s);

using Trajectory = std::vector<State>;

}  // namespace axib
