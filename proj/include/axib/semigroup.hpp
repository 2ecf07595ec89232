#pragma once

#include "axib/grid.hpp"

namespace axib {

// ============================================================
// Exact linear propagators
// ============================================================
//
// Both propagators share the separable kernel shape
//
//   (S_i(t) f)(r,z) = (1/4 pi t) int (r~/r)^{1/2} N_i(t/(r r~))
//                       exp(-((r-r~)^2+(z-z~)^2)/4t) f(r~,z~) dr~ dz~
//
// so a grid application factors into an r-matrix A and a z-matrix B with
// O(n_r^2 n_z + n_r n_z^2) cost. The divergence-composed variants use the
// integrated-by-parts kernels (N_i' and Gaussian-derivative factors) so no
// finite differencing of the input is ever needed.
//
// Discretization choices:
//  - B columns are normalized to the exact Gaussian mass sqrt(4 pi t),
//    which keeps the z-direction heat flow conservative even when the
//    kernel is marginally resolved.
//  - The S2 r-matrix folds in the axis-corrected radial quadrature weights
//    and normalizes each source column against the same weighted mass
//    functional as total_mass, making mass conservation structural (exact
//    to rounding) rather than approximate.
//  - The S1 family keeps plain midpoint weights: its kernel vanishes
//    linearly at the axis and is not mass-conserving (Dirichlet behavior).

using VectorField = VelocityField;

// Time resolution floor: below (min(dr,dz)/8)^2 the Gaussian kernel is
// narrower than a cell and cannot be sampled; the scalar propagators return
// the input unchanged (their t -> 0 limit) and the div variants evaluate at
// the floor instead. A one-line warning is emitted once per process.
double semigroup_dt_min(const Grid& g);

ScalarField apply_S1(double t, const ScalarField& f);
ScalarField apply_S2_axi(double t, const ScalarField& f);

// S1(t) div_star f for f = (f^r, f^z), div_star = d_r f^r + d_z f^z.
ScalarField apply_S1_div_star(double t, const VectorField& f);

// S2(t) div f with the full divergence div f = div_star f + f^r / r.
ScalarField apply_S2_div(double t, const VectorField& f);

// Measured constant of the weighted smoothing inequality
//   ||r^a S1(t) f||_{L^q} <= C t^{-(1/p - 1/q + (b-a)/2)} ||r^b f||_{L^p}:
// returns t^{1/p-1/q+(b-a)/2} ||r^a S1(t) f||_{L^q} / ||r^b f||_{L^p}.
// Requires a <= b and 1 <= p <= q.
double weighted_semigroup_probe(double t, const ScalarField& f, double alpha, double beta,
                                double p, double q);

}  // namespace axib
