#include "axib/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "axib/errors.hpp"
#include "axib/norms.hpp"
#include "axib/semigroup.hpp"

namespace axib {

namespace {

bool any_nonzero(const std::vector<double>& v) {
    for (double x : v)
        if (x != 0.0) return true;
    return false;
}

void check_state_shape(const State& s, const Grid& g, const char* op) {
    if (!(s.omega.grid == g) || !(s.rho.grid == g) || !(s.rho_tilde.grid == g))
        throw domain_error(std::string(op) + ": state lives on a different grid");
    if (s.omega.tag != Measure::PLANAR || s.rho_tilde.tag != Measure::PLANAR ||
        s.rho.tag != Measure::AXISYM)
        throw domain_error(std::string(op) + ": state measure tags are off");
    if (s.omega.values.size() != g.size() || s.rho_tilde.values.size() != g.size() ||
        s.rho.values.size() != g.size())
        throw domain_error(std::string(op) + ": state field sizes are off");
}

VelocityField velocity_or_zero(const ScalarField& omega, const BSConfig& bs) {
    if (!any_nonzero(omega.values)) return VelocityField(omega.grid);
    return velocity_from_vorticity(omega, bs);
}

struct QuadNodes {
    std::vector<double> tau;  // offsets into (0, span)
    std::vector<double> w;
};

// Midpoint rule after the square-root substitution, mirrored about the
// midpoint: tau = span u^2 on the data half, tau = span (1 - v^2) on the
// propagator half. Both integrands have square-root expansions at their
// respective ends, which the substitution turns into smooth functions of
// the quadrature variable, so refinement converges cleanly from either
// side. No node touches an endpoint.
QuadNodes duhamel_nodes(double span, std::size_t m) {
    QuadNodes q;
    if (m < 2) {
        q.tau.assign(1, 0.5 * span);
        q.w.assign(1, span);
        return q;
    }
    const std::size_t m_lo = (m + 1) / 2;
    const std::size_t m_hi = m / 2;
    const double half = std::sqrt(0.5);
    q.tau.reserve(m);
    q.w.reserve(m);
    for (std::size_t j = 0; j < m_lo; ++j) {
        const double u =
            (static_cast<double>(j) + 0.5) / static_cast<double>(m_lo) * half;
        q.tau.push_back(span * u * u);
        q.w.push_back(2.0 * span * u * half / static_cast<double>(m_lo));
    }
    for (std::size_t j = m_hi; j-- > 0;) {
        const double v =
            (static_cast<double>(j) + 0.5) / static_cast<double>(m_hi) * half;
        q.tau.push_back(span * (1.0 - v * v));
        q.w.push_back(2.0 * span * v * half / static_cast<double>(m_hi));
    }
    return q;
}

struct Segment {
    std::size_t lo = 0;
    std::size_t hi = 0;
    double w_lo = 1.0;
    double w_hi = 0.0;
};

Segment locate(const std::vector<double>& ts, double t) {
    Segment s;
    if (t <= ts.front()) return s;
    if (t >= ts.back()) {
        s.lo = s.hi = ts.size() - 1;
        return s;
    }
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    s.hi = static_cast<std::size_t>(it - ts.begin());
    s.lo = s.hi - 1;
    const double spread = ts[s.hi] - ts[s.lo];
    s.w_hi = (t - ts[s.lo]) / spread;
    s.w_lo = 1.0 - s.w_hi;
    return s;
}

void lerp_into(const std::vector<double>& a, const std::vector<double>& b, double wa,
               double wb, std::vector<double>& out) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = wa * a[i] + wb * b[i];
}

void axpy(double c, const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) y[i] += c * x[i];
}

// Subtracts the quadrature of the advection and source integrals from the
// already-filled free parts in rhs. hist, vels, and ts are aligned
// snapshots of the iterate being integrated; fields are interpolated
// linearly between them.
void subtract_duhamel_terms(State& rhs, const std::vector<const State*>& hist,
                            const std::vector<const VelocityField*>& vels,
                            const std::vector<double>& ts, double t0, double t,
                            std::size_t m) {
    const Grid& g = rhs.omega.grid;
    const std::size_t n = g.size();
    const double span = t - t0;
    const QuadNodes q = duhamel_nodes(span, m);

    // Lags below the resolved scale h^2/4 are evaluated at that scale: a
    // narrower kernel cannot be represented on the grid and only injects
    // pointwise noise, while the integrand varies like sqrt(lag) there, so
    // the substitution perturbs the integral at third order in h.
    const double h = std::min(g.dr, g.dz);
    const double lag_floor = 0.25 * h * h;

    std::vector<double> om(n), rh(n), vr(n), vz(n);
    VectorField vec(g);

    for (std::size_t j = 0; j < q.tau.size(); ++j) {
        const double lag = std::max(span - q.tau[j], std::min(lag_floor, 0.5 * span));
        const Segment s = locate(ts, t0 + q.tau[j]);
        lerp_into(hist[s.lo]->omega.values, hist[s.hi]->omega.values, s.w_lo, s.w_hi, om);
        lerp_into(hist[s.lo]->rho.values, hist[s.hi]->rho.values, s.w_lo, s.w_hi, rh);
        lerp_into(vels[s.lo]->vr, vels[s.hi]->vr, s.w_lo, s.w_hi, vr);
        lerp_into(vels[s.lo]->vz, vels[s.hi]->vz, s.w_lo, s.w_hi, vz);

        for (std::size_t i = 0; i < n; ++i) vec.vr[i] = vr[i] * om[i];
        for (std::size_t i = 0; i < n; ++i) vec.vz[i] = vz[i] * om[i];
        axpy(-q.w[j], apply_S1_div_star(lag, vec).values, rhs.omega.values);

        for (std::size_t i = 0; i < g.n_r; ++i) {
            const double r = g.r(i);
            const std::size_t base = i * g.n_z;
            for (std::size_t l = 0; l < g.n_z; ++l) {
                vec.vr[base + l] = vr[base + l] * r * rh[base + l];
                vec.vz[base + l] = vz[base + l] * r * rh[base + l];
            }
        }
        axpy(-q.w[j], apply_S1_div_star(lag, vec).values, rhs.rho_tilde.values);

        std::copy(rh.begin(), rh.end(), vec.vr.begin());
        std::fill(vec.vz.begin(), vec.vz.end(), 0.0);
        const ScalarField grad_term = apply_S1_div_star(lag, vec);
        axpy(-q.w[j], grad_term.values, rhs.omega.values);
        axpy(-2.0 * q.w[j], grad_term.values, rhs.rho_tilde.values);

        for (std::size_t i = 0; i < n; ++i) vec.vr[i] = vr[i] * rh[i];
        for (std::size_t i = 0; i < n; ++i) vec.vz[i] = vz[i] * rh[i];
        axpy(-q.w[j], apply_S2_div(lag, vec).values, rhs.rho.values);
    }
}

std::string ratio_list(const std::vector<double>& r) {
    if (r.empty()) return "none";
    std::string s;
    char buf[32];
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.3g", r[i]);
        if (i) s += ", ";
        s += buf;
    }
    return s;
}

}  // namespace

void check_solver_config(const SolverConfig& cfg) {
    if (cfg.grid.size() == 0 || !(cfg.grid.dr > 0.0) || !(cfg.grid.dz > 0.0))
        throw config_error("solver config: grid is not set up");
    if (!(cfg.T > 0.0)) throw config_error("solver config: T must be positive");
    if (cfg.n_time < 8) throw config_error("solver config: n_time must be at least 8");
    if (!(cfg.picard_tol > 0.0 && cfg.picard_tol < 1e-2))
        throw config_error("solver config: picard_tol must lie in (0, 1e-2)");
    if (cfg.picard_max == 0) throw config_error("solver config: picard_max must be positive");
    if (cfg.restart_count == 0)
        throw config_error("solver config: restart_count must be positive");
    if (cfg.bs.subcell_refine < 1)
        throw config_error("solver config: subcell_refine must be at least 1");
}

State duhamel_rhs(const Trajectory& history, double t, const State& data,
                  std::size_t n_time, const BSConfig& bs) {
    if (history.empty()) throw domain_error("duhamel_rhs: empty history");
    const Grid& g = data.omega.grid;
    check_state_shape(data, g, "duhamel_rhs");
    for (const State& s : history) check_state_shape(s, g, "duhamel_rhs");
    for (std::size_t k = 1; k < history.size(); ++k)
        if (!(history[k].t > history[k - 1].t))
            throw domain_error("duhamel_rhs: history times must increase strictly");
    if (!(t > data.t)) throw domain_error("duhamel_rhs: requires t > data.t");
    if (n_time == 0) throw domain_error("duhamel_rhs: n_time must be positive");
    const double slack = 1e-12 * std::max(1.0, std::abs(t));
    if (history.front().t > data.t + slack || history.back().t < t - slack)
        throw domain_error("duhamel_rhs: history does not cover [data.t, t]");

    const double span = t - data.t;
    State rhs;
    rhs.t = t;
    rhs.omega = apply_S1(span, data.omega);
    rhs.rho_tilde = apply_S1(span, data.rho_tilde);
    rhs.rho = apply_S2_axi(span, data.rho);

    std::vector<VelocityField> vel_store;
    vel_store.reserve(history.size());
    for (const State& s : history) vel_store.push_back(velocity_or_zero(s.omega, bs));

    std::vector<const State*> hist;
    std::vector<const VelocityField*> vels;
    std::vector<double> ts;
    for (std::size_t k = 0; k < history.size(); ++k) {
        hist.push_back(&history[k]);
        vels.push_back(&vel_store[k]);
        ts.push_back(history[k].t);
    }

    subtract_duhamel_terms(rhs, hist, vels, ts, data.t, t, n_time);
    return rhs;
}

WindowResult picard_solve(const State& data, const SolverConfig& cfg) {
    check_solver_config(cfg);
    check_state_shape(data, cfg.grid, "picard_solve");

    const Grid& g = cfg.grid;
    const std::size_t K = cfg.n_time;
    const double t0 = data.t;

    // output times cluster quadratically toward the window start
    std::vector<double> tk(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double frac = (static_cast<double>(k) + 1.0) / static_cast<double>(K);
        tk[k] = t0 + cfg.T * frac * frac;
    }
    tk[K - 1] = t0 + cfg.T;

    // free parts; the omega and rho lines double as the first iterate
    std::vector<ScalarField> free_om(K), free_rt(K), free_rho(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double dt = tk[k] - t0;
        free_om[k] = apply_S1(dt, data.omega);
        free_rt[k] = apply_S1(dt, data.rho_tilde);
        free_rho[k] = apply_S2_axi(dt, data.rho);
    }

    Trajectory cur(K);
    for (std::size_t k = 0; k < K; ++k) cur[k] = make_state(tk[k], free_om[k], free_rho[k]);

    const VelocityField v0 = velocity_or_zero(data.omega, cfg.bs);

    // weighted space-time size of a window trajectory, with local times
    const auto window_norm = [t0](const Trajectory& traj) {
        double x = 0.0, y = 0.0, z = 0.0;
        const double p = 4.0 / 3.0;
        for (const State& s : traj) {
            const double dt = s.t - t0;
            const double q14 = std::pow(dt, 0.25);
            const double q38 = std::pow(dt, 0.375);
            x = std::max(x, q14 * lp_norm(s.omega, p));
            y = std::max(y, q14 * lp_norm(s.rho_tilde, p));
            z = std::max(z, q38 * lp_norm(s.rho, p));
        }
        return x + y + z;
    };

    IterationLog log;
    std::vector<ScalarField> rt_line(K);
    double prev_delta = -1.0;
    std::size_t growth_streak = 0;

    for (std::size_t sweep = 1; sweep <= cfg.picard_max; ++sweep) {
        std::vector<VelocityField> vel_store;
        vel_store.reserve(K + 1);
        vel_store.push_back(v0);
        for (std::size_t k = 0; k < K; ++k)
            vel_store.push_back(velocity_or_zero(cur[k].omega, cfg.bs));

        std::vector<const State*> hist;
        std::vector<const VelocityField*> vels;
        std::vector<double> ts;
        hist.push_back(&data);
        vels.push_back(&vel_store[0]);
        ts.push_back(t0);
        for (std::size_t k = 0; k < K; ++k) {
            hist.push_back(&cur[k]);
            vels.push_back(&vel_store[k + 1]);
            ts.push_back(tk[k]);
        }

        Trajectory next(K);
        for (std::size_t k = 0; k < K; ++k) {
            State rhs;
            rhs.t = tk[k];
            rhs.omega = free_om[k];
            rhs.rho_tilde = free_rt[k];
            rhs.rho = free_rho[k];
            subtract_duhamel_terms(rhs, hist, vels, ts, t0, tk[k], cfg.n_time);
            rt_line[k] = std::move(rhs.rho_tilde);
            next[k] = make_state(tk[k], rhs.omega, rhs.rho);
        }

        Trajectory diff(K);
        for (std::size_t k = 0; k < K; ++k) {
            ScalarField dom(g, Measure::PLANAR);
            ScalarField drho(g, Measure::AXISYM);
            for (std::size_t i = 0; i < g.size(); ++i) {
                dom.values[i] = next[k].omega.values[i] - cur[k].omega.values[i];
                drho.values[i] = next[k].rho.values[i] - cur[k].rho.values[i];
            }
            diff[k] = make_state(tk[k], dom, drho);
        }
        const double delta = window_norm(diff);
        const double scale = std::max(window_norm(next), 1e-300);

        log.deltas.push_back(delta);
        if (prev_delta > 0.0) log.ratios.push_back(delta / prev_delta);
        log.iterations = sweep;
        cur = std::move(next);

        if (!std::isfinite(delta))
            throw divergence_error("picard_solve: step size lost finiteness at sweep " +
                                   std::to_string(sweep) +
                                   "; step ratios: " + ratio_list(log.ratios));
        if (delta <= cfg.picard_tol * scale) {
            log.converged = true;
            break;
        }
        if (!log.ratios.empty() && log.ratios.back() >= 1.0)
            ++growth_streak;
        else
            growth_streak = 0;
        if (growth_streak >= 2)
            throw divergence_error("picard_solve: two consecutive non-contracting sweeps; "
                                   "step ratios: " +
                                   ratio_list(log.ratios));
        prev_delta = delta;
    }
    if (!log.converged)
        throw divergence_error("picard_solve: no convergence within " +
                               std::to_string(cfg.picard_max) +
                               " sweeps; step ratios: " + ratio_list(log.ratios));

    double residual = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        ScalarField d(g, Measure::PLANAR);
        for (std::size_t i = 0; i < g.size(); ++i)
            d.values[i] = rt_line[k].values[i] - cur[k].rho_tilde.values[i];
        const double num = lp_norm(d, 4.0 / 3.0);
        const double den = lp_norm(cur[k].rho_tilde, 4.0 / 3.0);
        if (num > 0.0) residual = std::max(residual, num / std::max(den, 1e-300));
    }
    log.rho_tilde_residual = residual;

    double trace = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        KahanSum acc;
        for (std::size_t j = 0; j < g.n_z; ++j) acc.add(std::fabs(cur[k].rho.at(0, j)));
        trace = std::max(trace, acc.value() * g.dz);
    }
    log.axis_trace = trace;

    WindowResult wr;
    wr.states = std::move(cur);
    wr.log = std::move(log);
    return wr;
}

Trajectory evolve(const State& data, double t_end, const SolverConfig& cfg,
                  std::vector<IterationLog>* window_logs) {
    check_solver_config(cfg);
    check_state_shape(data, cfg.grid, "evolve");
    if (!(t_end > data.t)) throw domain_error("evolve: requires t_end > data.t");

    const double floor_t = semigroup_dt_min(cfg.grid);
    const double done_slack = 1e-12 * std::max(1.0, std::abs(t_end));

    Trajectory out;
    out.push_back(data);
    double window = std::min(cfg.T, t_end - data.t);
    std::size_t windows_used = 0;

    while (out.back().t < t_end - done_slack) {
        if (windows_used >= cfg.restart_count)
            throw divergence_error("evolve: window budget exhausted before reaching t_end");
        SolverConfig wcfg = cfg;
        wcfg.T = std::min(window, t_end - out.back().t);
        try {
            WindowResult wr = picard_solve(out.back(), wcfg);
            if (window_logs) window_logs->push_back(wr.log);
            for (State& s : wr.states) out.push_back(std::move(s));
            ++windows_used;
            window = std::min(window * 1.5, cfg.T);
        } catch (const divergence_error&) {
            ++windows_used;
            window *= 0.5;
            if (window < floor_t) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "evolve: window shrank to %.3g, below the diffusion floor "
                              "%.3g, at t = %.6g",
                              window, floor_t, out.back().t);
                throw divergence_error(buf);
            }
        }
    }
    return out;
}

}  // namespace axib
