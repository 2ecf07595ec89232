#include "axib/state.hpp"

#include <cmath>

namespace axib {

State make_state(double t, const ScalarField& omega, const ScalarField& rho) {
    State s;
    s.t = t;
    s.omega = omega;
    s.omega.tag = Measure::PLANAR;
    s.rho = rho;
    s.rho.tag = Measure::AXISYM;

    s.rho_tilde = ScalarField(rho.grid, Measure::PLANAR);
    for (std::size_t i = 0; i < rho.grid.n_r; ++i) {
        const double r = rho.grid.r(i);
        for (std::size_t j = 0; j < rho.grid.n_z; ++j)
            s.rho_tilde.at(i, j) = r * rho.at(i, j);
    }
    return s;
}

double state_compat_error(const State& s) {
    double scale = 0.0;
    for (double v : s.rho_tilde.values) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;

    double worst = 0.0;
    for (std::size_t i = 0; i < s.rho.grid.n_r; ++i) {
        const double r = s.rho.grid.r(i);
        for (std::size_t j = 0; j < s.rho.grid.n_z; ++j)
            worst = std::max(worst, std::abs(s.rho_tilde.at(i, j) - r * s.rho.at(i, j)));
    }
    return worst / scale;
}

}  // namespace axib
