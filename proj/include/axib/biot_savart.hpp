#pragma once

#include <map>
#include <string>

#include "axib/grid.hpp"

namespace axib {

// ============================================================
// Velocity reconstruction from axisymmetric vorticity
// ============================================================
//
// v^r(r,z) = int K_r(r,z,r~,z~) w(r~,z~) dr~ dz~ and likewise for v^z, with
//
//   K_r = -(1/pi) (z-z~) / (r^{3/2} r~^{1/2}) F'(xi^2)
//   K_z =  (1/pi) (r-r~) / (r^{3/2} r~^{1/2}) F'(xi^2)
//        + (1/4pi) (r~^{1/2} / r^{3/2}) (F(xi^2) - 2 xi^2 F'(xi^2))
//
// where xi^2 = ((r-r~)^2 + (z-z~)^2) / (r~ r). Both kernels blow up like
// 1/dist at coincidence, which is integrable in 2-D; cells near the target
// are refined and the self-cell uses an even subdivision so no quadrature
// point lands on the singularity.

struct BSConfig {
    int subcell_refine = 8;     // per-axis subdivision of near-singular cells
    double near_radius = 0.0;   // refinement radius; 0 means 2 max(dr, dz)
};

enum class KernelComponent { R, Z };

// Pointwise kernel evaluation; throws domain_error off the admissible set
// (r, r~ > 0, points distinct).
double kernel_K(double r, double z, double rt, double zt, KernelComponent which);

// Direct kernel summation over all source cells (O(N^2) with per-target-row
// kernel tables), near-singular cells refined per the config.
VelocityField velocity_from_vorticity(const ScalarField& omega, const BSConfig& cfg = {});

// Stream-function route: Psi from the kernel sqrt(r~ r)/(2 pi) F(xi^2), then
// v = (-d_z Psi / r, d_r Psi / r) by centered differences. Independent
// cross-check of velocity_from_vorticity, not the production path.
ScalarField stream_function(const ScalarField& omega, const BSConfig& cfg = {});
VelocityField velocity_from_stream(const ScalarField& psi);

// Measured constants of the velocity-from-vorticity inequalities:
//   "v_L4_over_w_L43":   ||v||_{L^4} / ||w||_{L^{4/3}}          (planar norms)
//   "v_sup_interp":      ||v||_inf / (||w||_{4/3}^s ||w||_4^{1-s}), s = 1/2
//   "rv_L4_over_rw_L43": ||r v||_{L^4} / ||r w||_{L^{4/3}}
// Throws domain_error when omega vanishes identically.
std::map<std::string, double> measure_velocity_estimates(const ScalarField& omega,
                                                         const BSConfig& cfg = {});

// max over nodes of |v^r| / r.
double vr_over_r_sup(const VelocityField& v);

}  // namespace axib
