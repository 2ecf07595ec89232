#include "axib/coupled_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "axib/errors.hpp"
#include "axib/norms.hpp"

namespace axib {

namespace {

void check_state(const State& s, const char* where) {
    if (s.omega.grid.n_r == 0 || s.omega.grid.n_z == 0)
        throw domain_error(std::string(where) + ": state has an empty grid");
    if (!(s.omega.grid == s.rho.grid))
        throw domain_error(std::string(where) + ": omega and rho grids differ");
    if (s.omega.tag != Measure::PLANAR || s.rho.tag != Measure::AXISYM)
        throw domain_error(std::string(where) + ": unexpected measure tags");
    if (s.omega.values.size() != s.omega.grid.size() ||
        s.rho.values.size() != s.rho.grid.size() ||
        s.rho_tilde.values.size() != s.omega.grid.size())
        throw domain_error(std::string(where) + ": field size does not match grid");
}

void check_trajectory(const Trajectory& traj, const char* where) {
    if (traj.empty())
        throw domain_error(std::string(where) + ": trajectory is empty");
    for (const State& s : traj) check_state(s, where);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        if (!(traj[k].t > traj[k - 1].t))
            throw domain_error(std::string(where) +
                               ": snapshot times must increase strictly");
        if (!(traj[k].omega.grid == traj.front().omega.grid))
            throw domain_error(std::string(where) +
                               ": snapshots live on different grids");
    }
}

void check_p(double p, const char* where) {
    if (!(p >= 1.0) || std::isnan(p))
        throw domain_error(std::string(where) + ": p must lie in [1, inf]");
}

ScalarField gamma_field(const State& s) {
    const Grid& g = s.omega.grid;
    ScalarField out(g, Measure::AXISYM);
    for (std::size_t i = 0; i < g.n_r; ++i) {
        const double inv_r = 1.0 / g.r(i);
        for (std::size_t j = 0; j < g.n_z; ++j)
            out.at(i, j) = s.omega.at(i, j) * inv_r - 0.5 * s.rho.at(i, j);
    }
    return out;
}

// d/dx by second-order differences: centered inside, one-sided three-point
// stencils at the first and last node.
double diff1d(double fm, double f0, double fp, double h, int kind) {
    if (kind == 0) return (fp - fm) / (2.0 * h);
    if (kind < 0) return (-3.0 * f0 + 4.0 * fp - fm) / (2.0 * h);  // fm = f(x+2h)
    return (3.0 * f0 - 4.0 * fm + fp) / (2.0 * h);                 // fp = f(x-2h)
}

// Squared gradient magnitude (d_r gamma)^2 + (d_z gamma)^2 nodewise.
ScalarField grad_sq(const ScalarField& f) {
    const Grid& g = f.grid;
    ScalarField out(g, Measure::AXISYM);
    for (std::size_t i = 0; i < g.n_r; ++i) {
        for (std::size_t j = 0; j < g.n_z; ++j) {
            double gr = 0.0, gz = 0.0;
            if (g.n_r >= 3) {
                if (i == 0)
                    gr = diff1d(f.at(2, j), f.at(0, j), f.at(1, j), g.dr, -1);
                else if (i == g.n_r - 1)
                    gr = diff1d(f.at(i - 1, j), f.at(i, j), f.at(i - 2, j), g.dr, +1);
                else
                    gr = diff1d(f.at(i - 1, j), f.at(i, j), f.at(i + 1, j), g.dr, 0);
            } else if (g.n_r == 2) {
                gr = (f.at(1, j) - f.at(0, j)) / g.dr;
            }
            if (g.n_z >= 3) {
                if (j == 0)
                    gz = diff1d(f.at(i, 2), f.at(i, 0), f.at(i, 1), g.dz, -1);
                else if (j == g.n_z - 1)
                    gz = diff1d(f.at(i, j - 1), f.at(i, j), f.at(i, j - 2), g.dz, +1);
                else
                    gz = diff1d(f.at(i, j - 1), f.at(i, j), f.at(i, j + 1), g.dz, 0);
            } else if (g.n_z == 2) {
                gz = (f.at(i, 1) - f.at(i, 0)) / g.dz;
            }
            out.at(i, j) = gr * gr + gz * gz;
        }
    }
    return out;
}

double sup_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.values) m = std::max(m, std::abs(x));
    return m;
}

// Least-squares slope and intercept of y against x.
void lsq_fit(const std::vector<double>& x, const std::vector<double>& y,
             double& slope, double& intercept) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double det = n * sxx - sx * sx;
    slope = (n * sxy - sx * sy) / det;
    intercept = (sy * sxx - sx * sxy) / det;
}

// Trace of the field on the axis r = 0 by linear extrapolation from the two
// innermost cell rows.
std::vector<double> axis_trace(const ScalarField& f) {
    const Grid& g = f.grid;
    std::vector<double> tr(g.n_z, 0.0);
    for (std::size_t j = 0; j < g.n_z; ++j)
        tr[j] = g.n_r >= 2 ? 1.5 * f.at(0, j) - 0.5 * f.at(1, j) : f.at(0, j);
    return tr;
}

constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

double lp_norm_r3(const ScalarField& f, double p) {
    if (f.tag != Measure::AXISYM)
        throw domain_error("lp_norm_r3: field must carry the axisymmetric measure");
    check_p(p, "lp_norm_r3");
    if (std::isinf(p)) return lp_norm(f, p);
    return std::pow(two_pi, 1.0 / p) * lp_norm(f, p);
}

GammaSnapshot compute_gamma(const State& s) {
    check_state(s, "compute_gamma");
    GammaSnapshot snap;
    snap.t = s.t;
    snap.gamma = gamma_field(s);
    const Grid& g = s.omega.grid;
    snap.gamma_tilde = ScalarField(g, Measure::PLANAR);
    for (std::size_t i = 0; i < g.n_r; ++i) {
        const double r = g.r(i);
        for (std::size_t j = 0; j < g.n_z; ++j)
            snap.gamma_tilde.at(i, j) = r * snap.gamma.at(i, j);
    }
    snap.min_value = snap.gamma.values.empty() ? 0.0 : snap.gamma.values.front();
    snap.max_value = snap.min_value;
    for (double x : snap.gamma.values) {
        snap.min_value = std::min(snap.min_value, x);
        snap.max_value = std::max(snap.max_value, x);
    }
    for (double p : {1.0, 2.0, 4.0, p_inf})
        snap.lp_table[p] = lp_norm_r3(snap.gamma, p);
    return snap;
}

Trajectory thin_trajectory(const Trajectory& traj, double min_gap) {
    check_trajectory(traj, "thin_trajectory");
    if (!(min_gap >= 0.0))
        throw domain_error("thin_trajectory: min_gap must be nonnegative");
    Trajectory out;
    out.push_back(traj.front());
    for (std::size_t k = 1; k + 1 < traj.size(); ++k)
        if (traj[k].t - out.back().t >= min_gap) out.push_back(traj[k]);
    if (traj.size() > 1) out.push_back(traj.back());
    return out;
}

SignReport max_principle_check(const Trajectory& traj) {
    check_trajectory(traj, "max_principle_check");
    SignReport rep;
    const State& s0 = traj.front();
    const ScalarField g0 = gamma_field(s0);

    // Sign classification must ignore rounding residue left over from the
    // cancellation omega / r - rho / 2, so values are compared against a
    // floor tied to the size of the two constituents.
    const Grid& g = s0.omega.grid;
    double scale0 = 0.0;
    for (std::size_t i = 0; i < g.n_r; ++i)
        for (std::size_t j = 0; j < g.n_z; ++j)
            scale0 = std::max(scale0, std::abs(s0.omega.at(i, j)) / g.r(i) +
                                          0.5 * std::abs(s0.rho.at(i, j)));
    const double floor = 1e-13 * scale0;

    double min0 = 0.0, max0 = 0.0, amp0 = 0.0;
    for (double x : g0.values) {
        min0 = std::min(min0, x);
        max0 = std::max(max0, x);
        amp0 = std::max(amp0, std::abs(x));
    }
    if (min0 < -floor && max0 > floor) {
        rep.applicable = false;
        rep.note = "initial field changes sign; check skipped";
        return rep;
    }
    rep.applicable = true;
    rep.sign = max0 > floor ? +1 : (min0 < -floor ? -1 : 0);
    rep.epsilon = 1e-8 * amp0;
    for (const State& s : traj) {
        const ScalarField gt = gamma_field(s);
        double excursion = 0.0;
        for (double x : gt.values) {
            double excess;
            if (rep.sign > 0)
                excess = -x;
            else if (rep.sign < 0)
                excess = x;
            else
                excess = std::abs(x);
            excursion = std::max(excursion, excess);
        }
        if (excursion > rep.worst_violation) {
            rep.worst_violation = excursion;
            rep.worst_time = s.t;
        }
    }
    rep.pass = rep.worst_violation <= rep.epsilon;
    if (rep.sign == 0)
        rep.note = "initial field vanishes; worst excursion reported for an external tolerance";
    return rep;
}

MonotonicityReport monotonicity_check(const Trajectory& traj, double p) {
    check_p(p, "monotonicity_check");
    check_trajectory(traj, "monotonicity_check");
    MonotonicityReport rep;
    rep.p = p;
    const bool finite_p = !std::isinf(p);
    double biggest = 0.0;
    for (const State& s : traj) {
        const ScalarField gt = gamma_field(s);
        rep.times.push_back(s.t);
        rep.values.push_back(lp_norm_r3(gt, p));
        biggest = std::max(biggest, sup_abs(gt));
        const std::vector<double> tr = axis_trace(gt);
        double flux = 0.0;
        if (finite_p) {
            for (double x : tr) flux += std::pow(std::abs(x), p);
            flux *= gt.grid.dz;
        } else {
            for (double x : tr) flux = std::max(flux, std::abs(x));
        }
        rep.axis_flux.push_back(flux);
    }
    rep.degenerate = biggest == 0.0;
    bool ok = true;
    for (std::size_t k = 1; k < rep.values.size(); ++k) {
        rep.decrements.push_back(rep.values[k - 1] - rep.values[k]);
        double ratio;
        if (rep.values[k - 1] > 0.0)
            ratio = rep.values[k] / rep.values[k - 1];
        else
            ratio = rep.values[k] > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        if (!(ratio <= 1.0 + 1e-8)) ok = false;
    }
    rep.pass = ok;
    return rep;
}

NashReport nash_decay_check(const Trajectory& traj) {
    check_trajectory(traj, "nash_decay_check");
    NashReport rep;
    for (const State& s : traj) {
        const ScalarField gt = gamma_field(s);
        const double a1 = lp_norm_r3(gt, 1.0);
        const double a2 = lp_norm_r3(gt, 2.0);
        const double gsq = two_pi * total_mass(grad_sq(gt));
        if (a1 > 0.0 && gsq > 0.0) {
            const double c = (a2 * a2) /
                             (std::pow(gsq, 0.6) * std::pow(a1, 0.8));
            if (c > rep.nash_constant) {
                rep.nash_constant = c;
                rep.nash_worst_time = s.t;
            }
        }
        if (s.t > 0.0) {
            rep.times.push_back(s.t);
            rep.sup_values.push_back(sup_abs(gt));
        }
    }
    std::vector<double> lx, ly;
    if (!rep.times.empty()) {
        const double t_max = rep.times.back();
        for (std::size_t k = 0; k < rep.times.size(); ++k) {
            if (rep.times[k] >= 0.1 * t_max && rep.sup_values[k] > 0.0) {
                lx.push_back(std::log(rep.times[k]));
                ly.push_back(std::log(rep.sup_values[k]));
            }
        }
    }
    std::size_t usable = 0;
    for (double v : rep.sup_values) usable += v > 0.0 ? 1 : 0;
    if (usable < 4) {
        rep.note = "fewer than four usable samples; no slope fitted";
        return rep;
    }
    if (!(rep.times.back() >= 10.0 * rep.times.front())) {
        rep.note = "time range spans less than one decade; no slope fitted";
        return rep;
    }
    if (lx.size() < 3) {
        rep.note = "fewer than three samples in the last decade; no slope fitted";
        return rep;
    }
    double slope = 0.0, intercept = 0.0;
    lsq_fit(lx, ly, slope, intercept);
    rep.fitted_slope = slope;
    rep.fit_samples = lx.size();
    rep.conclusive = true;
    return rep;
}

BoundsReport theorem_bounds_check(const Trajectory& traj, double p) {
    check_p(p, "theorem_bounds_check");
    check_trajectory(traj, "theorem_bounds_check");
    BoundsReport rep;
    rep.p = p;
    const double wp = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
    const double t0 = traj.front().t;
    const double t_half = t0 + 0.5 * (traj.back().t - t0);
    double half_om = 0.0, half_rt = 0.0, half_rho = 0.0;
    for (const State& s : traj) {
        const double planar_w = std::pow(s.t, wp);
        const double axi_w = std::pow(s.t, 1.5 * wp);
        const double q_om = planar_w * lp_norm(s.omega, p);
        const double q_rt = planar_w * lp_norm(s.rho_tilde, p);
        const double q_rho = axi_w * lp_norm_r3(s.rho, p);
        rep.sup_omega = std::max(rep.sup_omega, q_om);
        rep.sup_rho_tilde = std::max(rep.sup_rho_tilde, q_rt);
        rep.sup_rho = std::max(rep.sup_rho, q_rho);
        if (s.t <= t_half) {
            half_om = std::max(half_om, q_om);
            half_rt = std::max(half_rt, q_rt);
            half_rho = std::max(half_rho, q_rho);
        }
    }
    auto growth = [](double full, double half) {
        if (half > 0.0) return full / half - 1.0;
        return full > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    rep.growth_omega = growth(rep.sup_omega, half_om);
    rep.growth_rho_tilde = growth(rep.sup_rho_tilde, half_rt);
    rep.growth_rho = growth(rep.sup_rho, half_rho);
    rep.stable = rep.growth_omega < 0.05 && rep.growth_rho_tilde < 0.05 &&
                 rep.growth_rho < 0.05;
    return rep;
}

}  // namespace axib
