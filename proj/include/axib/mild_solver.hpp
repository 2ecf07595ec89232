#pragma once

#include <cstddef>
#include <vector>

#include "axib/biot_savart.hpp"
#include "axib/state.hpp"

namespace axib {

// ============================================================
// Mild solver for the coupled vorticity-density system
// ============================================================
//
// The pair (omega, rho) is advanced through its integral form: each
// component is the propagated initial data minus time integrals of the
// advection terms, with the radial density gradient acting as the source
// that couples rho into omega,
//
//   omega(t)    = S1(t) omega_0 - int_0^t S1(t-s) div*(v omega) ds
//                                - int_0^t S1(t-s) d_r rho ds
//   r rho(t)    = S1(t) (r rho_0) - int_0^t S1(t-s) div*(v r rho) ds
//                                 - 2 int_0^t S1(t-s) d_r rho ds
//   rho(t)      = S2(t) rho_0 - int_0^t S2(t-s) div(v rho) ds
//
// with v recovered from omega by the Biot-Savart kernels. The solver
// evolves (omega, rho) and derives r rho algebraically; the middle
// equation is evaluated only as a residual check on the result.
//
// Time integrals use the substitution s = t u^2 with midpoint nodes in u,
// mirrored about the half-way point so both the data-side layer near s = 0
// and the propagator-side layer near s = t are flattened; square-root
// behavior at either end becomes smooth in the quadrature variable.

struct SolverConfig {
    Grid grid;
    BSConfig bs{};
    double T = 0.5;                // Picard window length
    std::size_t n_time = 16;       // quadrature nodes and snapshots per window
    double picard_tol = 1e-8;      // relative step size that counts as converged
    std::size_t picard_max = 50;   // sweep budget per window
    std::size_t restart_count = 256;  // window budget for evolve
};

// Throws config_error naming the offending setting: the grid must be set
// up, T positive, n_time at least 8, picard_tol inside (0, 1e-2).
void check_solver_config(const SolverConfig& cfg);

struct IterationLog {
    std::vector<double> deltas;   // distance between consecutive sweeps
    std::vector<double> ratios;   // deltas[i] / deltas[i-1]
    std::size_t iterations = 0;
    bool converged = false;
    double rho_tilde_residual = 0.0;  // relative defect of the derived component
                                      // against its own integral equation
    double axis_trace = 0.0;  // max over snapshots of int |rho(r_min, z)| dz,
                              // logged as a boundary monitor, not asserted zero
};

struct WindowResult {
    Trajectory states;
    IterationLog log;
};

// Right side of the three integral equations at absolute time t, taking the
// window data at data.t as initial values and reading the current iterate
// from history. History must be sorted by time and cover [data.t, t]; the
// quadrature interpolates fields linearly between its snapshots. Velocity
// is recovered at the snapshot times and interpolated, which agrees with
// recovering it from interpolated vorticity because the Biot-Savart map is
// linear. The returned rho_tilde component is the middle equation evaluated
// on its own, so comparing it against r * rho measures the consistency of
// the derived component.
State duhamel_rhs(const Trajectory& history, double t, const State& data,
                  std::size_t n_time = 16, const BSConfig& bs = {});

// Fixed-point sweep over one window [data.t, data.t + cfg.T]. Starts from
// the propagated data (the free solution), iterates the integral map, and
// measures each step in the weighted space-time norm
//   sup t^{1/4} |omega|_{4/3} + sup t^{1/4} |r rho|_{4/3} + sup t^{3/8} |rho|_{4/3}
// with window-local times. Converges when the relative step drops below
// picard_tol; two consecutive non-contracting sweeps, a non-finite step, or
// an exhausted sweep budget raise divergence_error carrying the ratio
// history. Snapshots cluster quadratically toward the window start.
WindowResult picard_solve(const State& data, const SolverConfig& cfg);

// Repeated windows from data.t to t_end. Each window restarts the integral
// equations from the last snapshot; a diverging window is retried at half
// the length, and after a success the length grows by 1.5x up to cfg.T.
// Shrinking below the grid's diffusion floor or exhausting restart_count
// raises divergence_error. The returned trajectory starts with the initial
// state; per-window logs are appended to window_logs when given.
Trajectory evolve(const State& data, double t_end, const SolverConfig& cfg,
                  std::vector<IterationLog>* window_logs = nullptr);

}  // namespace axib
