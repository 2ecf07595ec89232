#include "axib/norms.hpp"

#include <cmath>

namespace axib {

double axis_quadrature_weight(std::size_t i, std::size_t n_r) {
    if (n_r < 2) return 1.0;
    if (i == 0) return 25.0 / 24.0;
    if (i == 1) return 23.0 / 24.0;
    return 1.0;
}

double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw domain_error("lp_norm: p must be >= 1");
    const Grid& g = f.grid;

    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }

    KahanSum acc;
    for (std::size_t i = 0; i < g.n_r; ++i) {
        const double w = (f.tag == Measure::AXISYM) ? g.r(i) : 1.0;
        for (std::size_t j = 0; j < g.n_z; ++j)
            acc.add(w * std::pow(std::abs(f.at(i, j)), p));
    }
    return std::pow(acc.value() * g.dr * g.dz, 1.0 / p);
}

double weighted_lp_norm(const ScalarField& f, double alpha, double p) {
    if (!(p >= 1.0)) throw domain_error("weighted_lp_norm: p must be >= 1");
    const Grid& g = f.grid;

    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < g.n_r; ++i) {
            const double w = std::pow(g.r(i), alpha);
            for (std::size_t j = 0; j < g.n_z; ++j)
                m = std::max(m, std::abs(w * f.at(i, j)));
        }
        return m;
    }

    KahanSum acc;
    for (std::size_t i = 0; i < g.n_r; ++i) {
        const double w = std::pow(g.r(i), alpha * p);
        for (std::size_t j = 0; j < g.n_z; ++j)
            acc.add(w * std::pow(std::abs(f.at(i, j)), p));
    }
    return std::pow(acc.value() * g.dr * g.dz, 1.0 / p);
}

double total_mass(const ScalarField& f) {
    const Grid& g = f.grid;
    KahanSum acc;
    for (std::size_t i = 0; i < g.n_r; ++i) {
        double w = 1.0;
        if (f.tag == Measure::AXISYM) w = axis_quadrature_weight(i, g.n_r) * g.r(i);
        for (std::size_t j = 0; j < g.n_z; ++j) acc.add(w * f.at(i, j));
    }
    return acc.value() * g.dr * g.dz;
}

SpaceTimeNorms space_time_norms(const Trajectory& history, double T) {
    if (history.empty()) throw domain_error("space_time_norms: empty history");

    SpaceTimeNorms out;
    for (const State& s : history) {
        if (!(s.t > 0.0) || s.t > T * (1.0 + 1e-12))
            throw domain_error("space_time_norms: time stamp outside (0, T]");
        const double q14 = std::pow(s.t, 0.25);
        const double q38 = std::pow(s.t, 0.375);
        out.x_t = std::max(out.x_t, q14 * lp_norm(s.omega, 4.0 / 3.0));
        out.y_t = std::max(out.y_t, q14 * lp_norm(s.rho_tilde, 4.0 / 3.0));
        out.z_t = std::max(out.z_t, q38 * lp_norm(s.rho, 4.0 / 3.0));
    }
    return out;
}

}  // namespace axib
