#pragma once

#include <cstddef>
#include <vector>

#include "axib/errors.hpp"

namespace axib {

// ============================================================
// Grid: cell-centered discretization of the half-plane r > 0
// ============================================================
//
// Nodes sit at r_i = (i + 1/2) dr and z_j = -z_half + (j + 1/2) dz, so every
// node keeps strictly off the axis r = 0; the kernels carry the boundary
// behavior, no ghost cells are needed.

struct Grid {
    double r_max = 0.0;
    double z_half = 0.0;
    std::size_t n_r = 0;
    std::size_t n_z = 0;
    double dr = 0.0;
    double dz = 0.0;

    double r(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dr; }
    double z(std::size_t j) const { return -z_half + (static_cast<double>(j) + 0.5) * dz; }
    std::size_t size() const { return n_r * n_z; }

    bool operator==(const Grid& o) const {
        return r_max == o.r_max && z_half == o.z_half && n_r == o.n_r && n_z == o.n_z;
    }
};

Grid make_grid(double r_max, double z_half, std::size_t n_r, std::size_t n_z);

// Measure tag selects the L^p family a field naturally lives in: PLANAR
// integrates against dr dz over the half-plane, AXISYM against r dr dz
// (the axisymmetric slice of the 3-D volume measure).
enum class Measure { PLANAR, AXISYM };

// ============================================================
// ScalarField / VelocityField
// ============================================================

struct ScalarField {
    Grid grid;
    Measure tag = Measure::PLANAR;
    std::vector<double> values;  // row-major, index i * n_z + j

    ScalarField() = default;
    ScalarField(const Grid& g, Measure m, double fill = 0.0)
        : grid(g), tag(m), values(g.size(), fill) {}

    double& at(std::size_t i, std::size_t j) { return values[i * grid.n_z + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * grid.n_z + j]; }
};

struct VelocityField {
    Grid grid;
    std::vector<double> vr;
    std::vector<double> vz;

    VelocityField() = default;
    explicit VelocityField(const Grid& g)
        : grid(g), vr(g.size(), 0.0), vz(g.size(), 0.0) {}

    double& vr_at(std::size_t i, std::size_t j) { return vr[i * grid.n_z + j]; }
    double vr_at(std::size_t i, std::size_t j) const { return vr[i * grid.n_z + j]; }
    double& vz_at(std::size_t i, std::size_t j) { return vz[i * grid.n_z + j]; }
    double vz_at(std::size_t i, std::size_t j) const { return vz[i * grid.n_z + j]; }
};

// Fills a field with A * exp(-a ((r - r0)^2 + (z - z0)^2)), the initial-data
// family used throughout the runs.
ScalarField gaussian_field(const Grid& g, Measure tag, double amplitude, double a,
                           double r0, double z0);

// True when the field contains no NaN or infinity.
bool all_finite(const ScalarField& f);

}  // namespace axib
