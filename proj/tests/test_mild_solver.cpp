#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "axib/errors.hpp"
#include "axib/mild_solver.hpp"
#include "axib/norms.hpp"
#include "axib/semigroup.hpp"

using namespace axib;

namespace {

State zero_state(const Grid& g, double t = 0.0) {
    State s = make_state(0.0, ScalarField(g, Measure::PLANAR), ScalarField(g, Measure::AXISYM));
    s.t = t;
    return s;
}

State gaussian_state(const Grid& g, double amp_w, double amp_r) {
    const ScalarField w = gaussian_field(g, Measure::PLANAR, amp_w, 4.0, 2.0, 0.0);
    const ScalarField r = gaussian_field(g, Measure::AXISYM, amp_r, 4.0, 2.0, 0.0);
    return make_state(0.0, w, r);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double rel_l43_diff(const ScalarField& a, const ScalarField& b) {
    ScalarField d = a;
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
    const double den = lp_norm(b, 4.0 / 3.0);
    return lp_norm(d, 4.0 / 3.0) / std::max(den, 1e-300);
}

SolverConfig base_config(const Grid& g) {
    SolverConfig cfg;
    cfg.grid = g;
    cfg.T = 0.2;
    cfg.n_time = 8;
    cfg.picard_tol = 1e-8;
    cfg.picard_max = 30;
    return cfg;
}

// Shared moderate-amplitude run used by several cases below.
struct ModerateRun {
    Trajectory traj;
    std::vector<IterationLog> logs;
    Grid grid;
};

const ModerateRun& moderate_run() {
    static const ModerateRun run = [] {
        ModerateRun r;
        r.grid = make_grid(8.0, 8.0, 32, 64);
        SolverConfig cfg = base_config(r.grid);
        cfg.T = 0.4;
        const State data = gaussian_state(r.grid, 0.3, 0.05);
        r.traj = evolve(data, 1.0, cfg, &r.logs);
        return r;
    }();
    return run;
}

}  // namespace

TEST_CASE("solver config validation rejects out-of-range settings") {
    const Grid g = make_grid(4.0, 4.0, 16, 32);
    SolverConfig good = base_config(g);
    CHECK_NOTHROW(check_solver_config(good));

    SolverConfig c = good;
    c.grid = Grid{};
    CHECK_THROWS_AS(check_solver_config(c), config_error);

    c = good;
    c.T = 0.0;
    CHECK_THROWS_AS(check_solver_config(c), config_error);

    c = good;
    c.n_time = 7;
    CHECK_THROWS_AS(check_solver_config(c), config_error);

    c = good;
    c.picard_tol = 0.0;
    CHECK_THROWS_AS(check_solver_config(c), config_error);
    c.picard_tol = 1e-2;
    CHECK_THROWS_AS(check_solver_config(c), config_error);

    c = good;
    c.picard_max = 0;
    CHECK_THROWS_AS(check_solver_config(c), config_error);

    c = good;
    c.restart_count = 0;
    CHECK_THROWS_AS(check_solver_config(c), config_error);
}

TEST_CASE("duhamel right side of the zero state is zero") {
    const Grid g = make_grid(6.0, 6.0, 32, 64);
    Trajectory hist;
    hist.push_back(zero_state(g, 0.0));
    hist.push_back(zero_state(g, 0.05));
    hist.push_back(zero_state(g, 0.1));

    const State rhs = duhamel_rhs(hist, 0.1, zero_state(g), 8);
    CHECK(max_abs(rhs.omega.values) == 0.0);
    CHECK(max_abs(rhs.rho_tilde.values) == 0.0);
    CHECK(max_abs(rhs.rho.values) == 0.0);
}

TEST_CASE("zero history freezes the flow and reduces to plain propagation") {
    const Grid g = make_grid(6.0, 6.0, 32, 64);
    const State data = gaussian_state(g, 0.7, 0.2);
    Trajectory hist;
    hist.push_back(zero_state(g, 0.0));
    hist.push_back(zero_state(g, 0.1));
    hist.push_back(zero_state(g, 0.2));

    const double t = 0.2;
    const State rhs = duhamel_rhs(hist, t, data, 8);

    const ScalarField w_free = apply_S1(t, data.omega);
    const ScalarField rt_free = apply_S1(t, data.rho_tilde);
    const ScalarField r_free = apply_S2_axi(t, data.rho);

    CHECK(max_abs_diff(rhs.omega.values, w_free.values) == 0.0);
    CHECK(max_abs_diff(rhs.rho_tilde.values, rt_free.values) == 0.0);
    CHECK(max_abs_diff(rhs.rho.values, r_free.values) == 0.0);
}

TEST_CASE("duhamel history checks reject gaps and bad orderings") {
    const Grid g = make_grid(4.0, 4.0, 16, 32);
    const State data = gaussian_state(g, 0.1, 0.0);

    Trajectory empty;
    CHECK_THROWS_AS(duhamel_rhs(empty, 0.1, data), domain_error);

    Trajectory shortened;
    shortened.push_back(zero_state(g, 0.0));
    shortened.push_back(zero_state(g, 0.05));
    CHECK_THROWS_AS(duhamel_rhs(shortened, 0.2, data), domain_error);

    Trajectory unsorted;
    unsorted.push_back(zero_state(g, 0.1));
    unsorted.push_back(zero_state(g, 0.05));
    unsorted.push_back(zero_state(g, 0.2));
    CHECK_THROWS_AS(duhamel_rhs(unsorted, 0.2, data), domain_error);

    Trajectory ok;
    ok.push_back(zero_state(g, 0.0));
    ok.push_back(zero_state(g, 0.2));
    CHECK_THROWS_AS(duhamel_rhs(ok, 0.0, data), domain_error);
}

TEST_CASE("pure swirl-free vorticity data keeps the density lines at zero") {
    const Grid g = make_grid(8.0, 8.0, 32, 64);
    SolverConfig cfg = base_config(g);
    cfg.T = 0.1;
    const ScalarField w = gaussian_field(g, Measure::PLANAR, 0.5, 4.0, 2.0, 0.0);
    const State data = make_state(0.0, w, ScalarField(g, Measure::AXISYM));

    const WindowResult wr = picard_solve(data, cfg);
    CHECK(wr.log.converged);
    CHECK(wr.log.iterations >= 2);
    for (const State& s : wr.states) {
        CHECK(max_abs(s.rho.values) == 0.0);
        CHECK(max_abs(s.rho_tilde.values) == 0.0);
        CHECK(max_abs(s.omega.values) > 0.0);
        CHECK(all_finite(s.omega));
    }
    for (double r : wr.log.ratios) CHECK(r < 1.0);
    CHECK(wr.log.rho_tilde_residual == 0.0);
}

TEST_CASE("small data picard iteration contracts geometrically") {
    const Grid g = make_grid(8.0, 8.0, 32, 64);
    SolverConfig cfg = base_config(g);
    cfg.T = 0.1;
    const State data = gaussian_state(g, 0.05, 0.02);

    const WindowResult wr = picard_solve(data, cfg);
    CHECK(wr.log.converged);
    CHECK(wr.log.iterations <= 15);
    REQUIRE(!wr.log.ratios.empty());
    for (double r : wr.log.ratios) CHECK(r < 1.0);
    CHECK(wr.log.ratios.front() < 0.5);

    REQUIRE(wr.states.size() == cfg.n_time);
    for (std::size_t k = 1; k < wr.states.size(); ++k)
        CHECK(wr.states[k].t > wr.states[k - 1].t);
    CHECK(wr.states.back().t == doctest::Approx(0.1).epsilon(1e-14));
    for (const State& s : wr.states) CHECK(state_compat_error(s) == 0.0);

    CHECK(wr.log.rho_tilde_residual >= 0.0);
    CHECK(wr.log.rho_tilde_residual < 0.1);
    CHECK(wr.log.axis_trace >= 0.0);
    CHECK(std::isfinite(wr.log.axis_trace));
}

TEST_CASE("zero data converges in a single sweep") {
    const Grid g = make_grid(4.0, 4.0, 16, 32);
    SolverConfig cfg = base_config(g);
    const WindowResult wr = picard_solve(zero_state(g), cfg);
    CHECK(wr.log.converged);
    CHECK(wr.log.iterations == 1);
    for (const State& s : wr.states) {
        CHECK(max_abs(s.omega.values) == 0.0);
        CHECK(max_abs(s.rho.values) == 0.0);
    }
}

TEST_CASE("oversized data makes the picard iteration diverge with a ratio trail") {
    const Grid g = make_grid(6.0, 6.0, 24, 48);
    SolverConfig cfg = base_config(g);
    cfg.T = 1.0;
    cfg.picard_max = 12;
    const State data = gaussian_state(g, 60.0, 10.0);

    try {
        picard_solve(data, cfg);
        FAIL("expected divergence");
    } catch (const divergence_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("ratio") != std::string::npos);
    }
}

TEST_CASE("tiny vorticity data follows the linear propagator") {
    const Grid g = make_grid(8.0, 8.0, 32, 64);
    SolverConfig cfg = base_config(g);
    cfg.T = 0.5;
    const ScalarField w = gaussian_field(g, Measure::PLANAR, 1e-6, 4.0, 2.0, 0.0);
    const State data = make_state(0.0, w, ScalarField(g, Measure::AXISYM));

    const Trajectory traj = evolve(data, 0.5, cfg);
    REQUIRE(traj.size() >= 2);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const ScalarField free = apply_S1(traj[k].t, data.omega);
        CHECK(rel_l43_diff(traj[k].omega, free) < 1e-6);
    }
}

TEST_CASE("tiny density data follows the linear propagator and feeds vorticity") {
    const Grid g = make_grid(8.0, 8.0, 32, 64);
    SolverConfig cfg = base_config(g);
    cfg.T = 0.5;
    const ScalarField r = gaussian_field(g, Measure::AXISYM, 1e-6, 4.0, 2.0, 0.0);
    const State data = make_state(0.0, ScalarField(g, Measure::PLANAR), r);

    const Trajectory traj = evolve(data, 0.5, cfg);
    REQUIRE(traj.size() >= 2);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const ScalarField free = apply_S2_axi(traj[k].t, data.rho);
        CHECK(rel_l43_diff(traj[k].rho, free) < 1e-6);
    }
    // the radial density gradient is a first-order source, so omega wakes up
    const State& last = traj.back();
    const double w_size = max_abs(last.omega.values);
    CHECK(w_size > 0.0);
    CHECK(w_size < 1e-4);
}

TEST_CASE("moderate run reaches t_end through several windows") {
    const ModerateRun& run = moderate_run();
    REQUIRE(run.traj.size() > 1);
    CHECK(run.logs.size() >= 2);
    for (const IterationLog& log : run.logs) {
        CHECK(log.converged);
        for (double r : log.ratios) CHECK(r < 1.0);
    }
    for (std::size_t k = 1; k < run.traj.size(); ++k)
        CHECK(run.traj[k].t > run.traj[k - 1].t);
    CHECK(run.traj.back().t == doctest::Approx(1.0).epsilon(1e-12));
    for (const State& s : run.traj) {
        CHECK(all_finite(s.omega));
        CHECK(all_finite(s.rho));
    }
}

TEST_CASE("density mass is conserved along the moderate run") {
    const ModerateRun& run = moderate_run();
    const double m0 = total_mass(run.traj.front().rho);
    REQUIRE(m0 > 0.0);
    for (const State& s : run.traj)
        CHECK(std::fabs(total_mass(s.rho) - m0) <= 1e-6 * std::fabs(m0));
}

TEST_CASE("combined swirl quantity loses L1 size along the moderate run") {
    // Gamma = omega / r - rho / 2 rides a sourceless advection-diffusion
    // equation, so its L1 size cannot grow. Snapshots earlier than the
    // grid's resolved time dr^2 only get a loose bound; the rest must
    // decrease strictly.
    const ModerateRun& run = moderate_run();
    const Grid& g = run.grid;
    const double resolved = g.dr * g.dr;
    double prev = -1.0;
    double prev_t = 0.0;
    for (const State& s : run.traj) {
        ScalarField gamma(g, Measure::AXISYM);
        for (std::size_t i = 0; i < g.n_r; ++i)
            for (std::size_t j = 0; j < g.n_z; ++j)
                gamma.at(i, j) = s.omega.at(i, j) / g.r(i) - 0.5 * s.rho.at(i, j);
        const double l1 = lp_norm(gamma, 1.0);
        if (prev >= 0.0) {
            CHECK(l1 <= prev * (1.0 + 1e-3));
            if (prev_t >= resolved) CHECK(l1 < prev);
        }
        prev = l1;
        prev_t = s.t;
    }
}

TEST_CASE("compensated norms shrink toward the initial time") {
    const ModerateRun& run = moderate_run();
    // snapshots at t, 4t, 16t from the first window
    std::vector<double> targets = {0.4 / 64.0, 0.4 / 16.0, 0.4 / 4.0};
    std::vector<double> qw, qr;
    for (double target : targets) {
        for (const State& s : run.traj)
            if (std::fabs(s.t - target) < 1e-12) {
                qw.push_back(std::pow(s.t, 0.25) * lp_norm(s.omega, 4.0 / 3.0));
                qr.push_back(std::pow(s.t, 0.375) * lp_norm(s.rho, 4.0 / 3.0));
            }
    }
    REQUIRE(qw.size() == 3);
    CHECK(qw[0] < qw[1]);
    CHECK(qw[1] < qw[2]);
    CHECK(qr[0] < qr[1]);
    CHECK(qr[1] < qr[2]);
}

TEST_CASE("snapshots approach each other as the time gap closes") {
    const ModerateRun& run = moderate_run();
    const State& last = run.traj.back();
    // the three snapshots before the end sit at shrinking gaps
    const std::size_t n = run.traj.size();
    REQUIRE(n >= 4);
    std::vector<double> diffs;
    for (std::size_t back = 3; back >= 1; --back) {
        const State& s = run.traj[n - 1 - back];
        ScalarField d = last.omega;
        for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= s.omega.values[i];
        diffs.push_back(lp_norm(d, 1.0));
    }
    CHECK(diffs[0] > diffs[1]);
    CHECK(diffs[1] > diffs[2]);
}

TEST_CASE("odd mirror symmetry in z survives the coupled evolution") {
    // the mirror z -> -z flips the sign of azimuthal vorticity, so the
    // symmetric sector is odd data for both components
    const Grid g = make_grid(8.0, 8.0, 32, 64);
    ScalarField w = gaussian_field(g, Measure::PLANAR, 0.3, 4.0, 2.0, 1.0);
    const ScalarField w_lo = gaussian_field(g, Measure::PLANAR, 0.3, 4.0, 2.0, -1.0);
    ScalarField r = gaussian_field(g, Measure::AXISYM, 0.05, 4.0, 2.0, 1.0);
    const ScalarField r_lo = gaussian_field(g, Measure::AXISYM, 0.05, 4.0, 2.0, -1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        w.values[i] -= w_lo.values[i];
        r.values[i] -= r_lo.values[i];
    }
    const State data = make_state(0.0, w, r);

    SolverConfig cfg = base_config(g);
    cfg.T = 0.3;
    const Trajectory traj = evolve(data, 0.3, cfg);

    const State& s = traj.back();
    const double w_scale = max_abs(s.omega.values);
    const double r_scale = max_abs(s.rho.values);
    REQUIRE(w_scale > 0.0);
    double w_asym = 0.0, r_asym = 0.0;
    for (std::size_t i = 0; i < g.n_r; ++i)
        for (std::size_t j = 0; j < g.n_z; ++j) {
            w_asym = std::max(w_asym,
                              std::fabs(s.omega.at(i, j) + s.omega.at(i, g.n_z - 1 - j)));
            r_asym = std::max(r_asym, std::fabs(s.rho.at(i, j) + s.rho.at(i, g.n_z - 1 - j)));
        }
    CHECK(w_asym <= 1e-12 * w_scale);
    CHECK(r_asym <= 1e-12 * r_scale);
}

TEST_CASE("quadrature refinement converges on a frozen history") {
    const Grid g = make_grid(8.0, 8.0, 32, 64);
    SolverConfig cfg = base_config(g);
    cfg.T = 0.2;
    const State data = gaussian_state(g, 0.2, 0.05);
    const WindowResult wr = picard_solve(data, cfg);

    Trajectory hist;
    hist.push_back(data);
    for (const State& s : wr.states) hist.push_back(s);

    const State r8 = duhamel_rhs(hist, 0.2, data, 8);
    const State r16 = duhamel_rhs(hist, 0.2, data, 16);
    const State r32 = duhamel_rhs(hist, 0.2, data, 32);

    const double d1 = rel_l43_diff(r8.omega, r16.omega);
    const double d2 = rel_l43_diff(r16.omega, r32.omega);
    CHECK(d1 < 1e-2);
    CHECK(d2 < d1 / 2.0);
}

TEST_CASE("persistent divergence drives the window below the diffusion floor") {
    const Grid g = make_grid(6.0, 6.0, 12, 24);
    SolverConfig cfg = base_config(g);
    cfg.T = 0.05;
    cfg.picard_max = 6;
    cfg.restart_count = 50;
    const State data = gaussian_state(g, 1e4, 1e3);

    try {
        evolve(data, 1.0, cfg);
        FAIL("expected window underflow");
    } catch (const divergence_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("floor") != std::string::npos);
    }
}

TEST_CASE("window budget exhaustion is reported as divergence") {
    const Grid g = make_grid(6.0, 6.0, 24, 48);
    SolverConfig cfg = base_config(g);
    cfg.T = 0.02;
    cfg.restart_count = 2;
    const State data = gaussian_state(g, 0.05, 0.01);
    CHECK_THROWS_AS(evolve(data, 0.2, cfg), divergence_error);
}
