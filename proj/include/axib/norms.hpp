#pragma once

#include <limits>
#include <vector>

#include "axib/grid.hpp"
#include "axib/state.hpp"

namespace axib {

// Compensated (Kahan) accumulator; used with a fixed traversal order so every
// norm is bit-reproducible across runs and thread counts.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Sentinel accepted by lp_norm for the sup norm.
inline constexpr double p_inf = std::numeric_limits<double>::infinity();

// Midpoint-rule L^p norm against the field's measure tag (PLANAR: dr dz,
// AXISYM: r dr dz); p = p_inf returns max |f| over nodes.
double lp_norm(const ScalarField& f, double p);

// ||r^alpha f|| in the PLANAR L^p family.
double weighted_lp_norm(const ScalarField& f, double alpha, double p);

// Radial quadrature weight of cell i: 25/24 and 23/24 on the first two
// cells, 1 elsewhere. The correction cancels the O(dr^2) axis defect of the
// plain midpoint rule for r dr integrands (r*f has a nonzero slope at
// r = 0). Shared between total_mass and the conservative S2 discretization.
double axis_quadrature_weight(std::size_t i, std::size_t n_r);

// Integral of f against the field's measure, using axis_quadrature_weight
// on the radial direction for AXISYM fields. This is the mass functional
// that the S2 propagator conserves exactly by construction.
double total_mass(const ScalarField& f);

struct SpaceTimeNorms {
    double x_t = 0.0;  // sup_t t^{1/4} ||omega||_{L^{4/3}(planar)}
    double y_t = 0.0;  // sup_t t^{1/4} ||r rho||_{L^{4/3}(planar)}
    double z_t = 0.0;  // sup_t t^{3/8} ||rho||_{L^{4/3}(weighted)}
};

SpaceTimeNorms space_time_norms(const Trajectory& history, double T);

}  // namespace axib
