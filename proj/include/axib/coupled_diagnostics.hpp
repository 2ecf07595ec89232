#pragma once

// Diagnostics for the combination gamma = omega / r - rho / 2, the quantity
// that couples the vorticity and density fields. For a solution of the
// system, gamma obeys a pure transport-diffusion law with no source, so it
// inherits a maximum principle and monotone L^p norms; r * gamma obeys the
// same propagator equation as omega. The checks in this header measure those
// structural properties on computed trajectories and report the observed
// constants and worst violations rather than asserting idealized values.
//
// Norms labelled "L^p" here are full three-dimensional norms of the
// axisymmetric field, including the azimuthal 2*pi factor that the plain
// grid quadrature omits.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "axib/grid.hpp"
#include "axib/state.hpp"

namespace axib {

// Full three-dimensional L^p norm of an axisymmetric nodal field: the grid
// L^p norm times (2*pi)^(1/p). Accepts p in [1, inf]. The field must carry
// the axisymmetric measure.
double lp_norm_r3(const ScalarField& f, double p);

struct GammaSnapshot {
    double t = 0.0;
    ScalarField gamma;        // omega / r - rho / 2, axisymmetric measure
    ScalarField gamma_tilde;  // r * gamma, planar measure
    std::map<double, double> lp_table;  // p in {1, 2, 4, inf} -> L^p norm
    double min_value = 0.0;
    double max_value = 0.0;
};

// Forms gamma and r * gamma from a state and tabulates L^p norms for
// p in {1, 2, 4, inf}. gamma_tilde equals r * gamma nodewise by
// construction.
GammaSnapshot compute_gamma(const State& s);

// Copy of the trajectory keeping the first snapshot and then only snapshots
// at least min_gap after the last kept one; the final snapshot is always
// kept. Snapshots closer together than the grid's diffusion resolution time
// carry no independent information, and pointwise diagnostics (sup norms in
// particular) read cleaner on a thinned sequence.
Trajectory thin_trajectory(const Trajectory& traj, double min_gap);

struct SignReport {
    bool applicable = false;  // initial gamma is single-signed
    int sign = 0;             // +1, -1, or 0 for an identically zero start
    double epsilon = 0.0;     // allowance, 1e-8 * max |gamma(0)|
    double worst_violation = 0.0;  // largest excursion past zero, >= 0
    double worst_time = 0.0;
    bool pass = false;
    std::string note;
};

// Checks that a single-signed initial gamma keeps its sign along the
// trajectory, up to epsilon = 1e-8 * max |gamma(0)|. A mixed-sign start
// makes the check inapplicable and is reported, not thrown. For a start
// with gamma identically zero the allowance is zero and the report carries
// the worst excursion for comparison against an external tolerance.
SignReport max_principle_check(const Trajectory& traj);

struct MonotonicityReport {
    double p = 1.0;
    std::vector<double> times;
    std::vector<double> values;      // L^p norms of gamma per snapshot
    std::vector<double> decrements;  // values[k] - values[k+1]
    std::vector<double> axis_flux;   // axis-line trace integral per snapshot
    double worst_ratio = 0.0;        // max over steps of values[k+1] / values[k]
    bool degenerate = false;         // gamma vanishes on the whole trajectory
    bool pass = false;               // every step ratio <= 1 + 1e-8
};

// Checks that t -> ||gamma(t)||_{L^p} is nonincreasing along the trajectory
// (tolerance factor 1 + 1e-8 per step) and reports the decrement sequence.
// Accepts p in [1, inf]. The axis trace entering axis_flux is extrapolated
// linearly to r = 0 from the two innermost cell rows; for finite p the
// entry is the z-integral of |trace|^p, for p = inf its supremum.
MonotonicityReport monotonicity_check(const Trajectory& traj, double p);

struct NashReport {
    bool conclusive = false;
    double nash_constant = 0.0;  // worst ratio ||g||_2^2 / (||grad g||_2^2)^(3/5) (||g||_1)^(4/5)
    double nash_worst_time = 0.0;
    double fitted_slope = 0.0;      // log sup |gamma| vs log t, last decade
    double predicted_slope = -1.5;  // heat-flow rate for L^1 data in 3-D
    std::size_t fit_samples = 0;
    std::vector<double> times;       // positive-time snapshots
    std::vector<double> sup_values;  // matching sup |gamma|
    std::string note;
};

// Evaluates the dimension-three Nash inequality on every snapshot (gradient
// by second-order centered differences, one-sided at the domain edges) and
// fits the decay exponent of sup |gamma| over the last decade of the time
// range. The fit needs at least four usable samples spanning a full decade;
// otherwise the report is marked inconclusive and no slope is fitted.
NashReport nash_decay_check(const Trajectory& traj);

struct BoundsReport {
    double p = 2.0;
    double sup_omega = 0.0;      // sup_t t^(1-1/p) ||omega(t)||_p, planar
    double sup_rho_tilde = 0.0;  // sup_t t^(1-1/p) ||r rho(t)||_p, planar
    double sup_rho = 0.0;        // sup_t t^((3/2)(1-1/p)) ||rho(t)||_{L^p}
    double growth_omega = 0.0;       // relative sup growth, full vs first half
    double growth_rho_tilde = 0.0;
    double growth_rho = 0.0;
    bool stable = false;  // every growth factor below 5%
};

// Measures the compensated suprema behind the decay estimates: planar
// t^(1-1/p) weights on omega and r * rho, and the three-dimensional weight
// t^((3/2)(1-1/p)) on rho. Stability is assessed by comparing the supremum
// over the first half of the time range with the supremum over all of it:
// a genuine supremum moves by less than 5% when the span doubles. Accepts
// p in [1, inf]; at p = 1 every exponent vanishes and the check reduces to
// boundedness.
BoundsReport theorem_bounds_check(const Trajectory& traj, double p);

}  // namespace axib
