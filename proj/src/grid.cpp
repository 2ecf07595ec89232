#include "axib/grid.hpp"

#include <cmath>

namespace axib {

Grid make_grid(double r_max, double z_half, std::size_t n_r, std::size_t n_z) {
    if (!(r_max > 0.0) || !(z_half > 0.0) || n_r == 0 || n_z == 0)
        throw config_error("make_grid: all arguments must be positive");
    Grid g;
    g.r_max = r_max;
    g.z_half = z_half;
    g.n_r = n_r;
    g.n_z = n_z;
    g.dr = r_max / static_cast<double>(n_r);
    g.dz = 2.0 * z_half / static_cast<double>(n_z);
    return g;
}

ScalarField gaussian_field(const Grid& g, Measure tag, double amplitude, double a,
                           double r0, double z0) {
    ScalarField f(g, tag);
    for (std::size_t i = 0; i < g.n_r; ++i) {
        const double dr2 = (g.r(i) - r0) * (g.r(i) - r0);
        for (std::size_t j = 0; j < g.n_z; ++j) {
            const double dz2 = (g.z(j) - z0) * (g.z(j) - z0);
            f.at(i, j) = amplitude * std::exp(-a * (dr2 + dz2));
        }
    }
    return f;
}

bool all_finite(const ScalarField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace axib
