#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "axib/errors.hpp"
#include "axib/grid.hpp"
#include "axib/norms.hpp"
#include "axib/quadrature.hpp"
#include "axib/state.hpp"
#include "axib/threading.hpp"

using namespace axib;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("grid cell centers and extents") {
    Grid g = make_grid(8.0, 6.0, 16, 24);
    CHECK(g.dr == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.dz == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.r(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.r(15) == doctest::Approx(7.75).epsilon(1e-15));
    CHECK(g.z(0) == doctest::Approx(-5.75).epsilon(1e-15));
    CHECK(g.z(23) == doctest::Approx(5.75).epsilon(1e-15));
    CHECK(g.size() == 16 * 24);

    CHECK_THROWS_AS(make_grid(-1.0, 6.0, 16, 24), config_error);
    CHECK_THROWS_AS(make_grid(8.0, 6.0, 0, 24), config_error);
}

TEST_CASE("field storage is row-major in r") {
    Grid g = make_grid(4.0, 4.0, 8, 16);
    ScalarField f(g, Measure::PLANAR);
    f.at(3, 7) = 2.5;
    CHECK(f.values[3 * 16 + 7] == 2.5);
    CHECK(all_finite(f));
    f.at(0, 0) = std::nan("");
    CHECK_FALSE(all_finite(f));
}

TEST_CASE("planar and axisymmetric Lp norms of a Gaussian") {
    Grid g = make_grid(8.0, 8.0, 256, 512);
    const double amp = 1.3, a = 4.0, r0 = 4.0;
    ScalarField f = gaussian_field(g, Measure::PLANAR, amp, a, r0, 0.0);

    const double p = 4.0 / 3.0;
    const double planar_exact = amp * std::pow(pi / (a * p), 1.0 / p);
    CHECK(lp_norm(f, p) == doctest::Approx(planar_exact).epsilon(1e-6));

    f.tag = Measure::AXISYM;
    const double axi_exact = amp * std::pow(r0 * pi / (a * p), 1.0 / p);
    CHECK(lp_norm(f, p) == doctest::Approx(axi_exact).epsilon(1e-6));

    CHECK(lp_norm(f, p_inf) == doctest::Approx(amp).epsilon(4e-3));
    CHECK_THROWS_AS(lp_norm(f, 0.5), domain_error);
}

TEST_CASE("weighted norm with unit radial power matches axisymmetric L1") {
    Grid g = make_grid(8.0, 8.0, 128, 256);
    ScalarField f = gaussian_field(g, Measure::PLANAR, 0.7, 2.0, 3.0, 0.5);
    const double w = weighted_lp_norm(f, 1.0, 1.0);
    f.tag = Measure::AXISYM;
    CHECK(w == doctest::Approx(lp_norm(f, 1.0)).epsilon(1e-13));
}

TEST_CASE("total mass of a compact Gaussian matches the analytic integral") {
    const double amp = 0.9, a = 4.0, r0 = 4.0;
    const double exact = amp * pi / a * r0;
    Grid g = make_grid(8.0, 8.0, 128, 256);
    ScalarField f = gaussian_field(g, Measure::AXISYM, amp, a, r0, 0.0);
    CHECK(std::abs(total_mass(f) - exact) < 1e-12);
}

TEST_CASE("axis-corrected mass weights reach fourth order on axis data") {
    // r exp(-a r^2) has nonzero slope at the axis, where the plain midpoint
    // rule carries an O(h^2) defect; the corrected end weights must cancel it.
    const double a = 4.0;
    const double exact = 1.0 / (2.0 * a) * std::sqrt(pi / a);
    double prev_err = 0.0;
    for (int n : {32, 64, 128}) {
        Grid g = make_grid(8.0, 8.0, n, 2 * n);
        ScalarField f = gaussian_field(g, Measure::AXISYM, 1.0, a, 0.0, 0.0);
        const double err = std::abs(total_mass(f) - exact);
        if (n > 32) CHECK(err < 0.12 * prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 2e-5);
}

TEST_CASE("state construction enforces the radial moment relation") {
    Grid g = make_grid(4.0, 4.0, 32, 64);
    ScalarField omega = gaussian_field(g, Measure::PLANAR, 1.0, 4.0, 2.0, 0.0);
    ScalarField rho = gaussian_field(g, Measure::AXISYM, 0.1, 4.0, 2.0, 0.0);
    State st = make_state(0.5, omega, rho);
    CHECK(st.t == 0.5);
    CHECK(st.rho_tilde.at(5, 9) ==
          doctest::Approx(g.r(5) * st.rho.at(5, 9)).epsilon(1e-15));
    CHECK(state_compat_error(st) < 1e-14);
    st.rho_tilde.at(5, 9) += 1e-3;
    CHECK(state_compat_error(st) > 1e-12);
}

TEST_CASE("space-time norms reproduce hand-computed values") {
    Grid g = make_grid(8.0, 8.0, 64, 128);
    ScalarField omega = gaussian_field(g, Measure::PLANAR, 1.0, 4.0, 4.0, 0.0);
    ScalarField rho = gaussian_field(g, Measure::AXISYM, 0.1, 4.0, 4.0, 0.0);
    Trajectory hist;
    hist.push_back(make_state(0.25, omega, rho));
    hist.push_back(make_state(1.0, omega, rho));

    SpaceTimeNorms n = space_time_norms(hist, 1.0);
    const double p = 4.0 / 3.0;
    const double w_norm = lp_norm(omega, p);
    ScalarField rt = hist[1].rho_tilde;
    const double rt_norm = lp_norm(rt, p);
    ScalarField raxi = rho;
    const double rho_norm = lp_norm(raxi, p);

    CHECK(n.x_t == doctest::Approx(w_norm).epsilon(1e-13));
    CHECK(n.y_t == doctest::Approx(rt_norm).epsilon(1e-13));
    CHECK(n.z_t == doctest::Approx(rho_norm).epsilon(1e-13));

    Trajectory bad;
    CHECK_THROWS_AS(space_time_norms(bad, 1.0), domain_error);
}

TEST_CASE("kahan summation survives adversarial ordering") {
    KahanSum s;
    s.add(1.0);
    for (int i = 0; i < 100000; ++i) s.add(1e-18);
    CHECK(s.value() == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
}

TEST_CASE("adaptive quadrature on smooth and sharply peaked integrands") {
    auto poly = [](double x) { return x * x; };
    CHECK(integrate(poly, 0.0, 1.0, 1e-12).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    auto wave = [](double x) { return std::sin(x); };
    CHECK(integrate(wave, 0.0, pi, 1e-12).value == doctest::Approx(2.0).epsilon(1e-13));

    const double w = 1e-6;
    auto spike = [w](double x) { return std::exp(-(x / w) * (x / w)); };
    const double exact = w * std::sqrt(pi) / 2.0;
    QuadResult res = integrate(spike, 0.0, 1.0, 1e-11, {w, 3 * w, 10 * w, 30 * w, 100 * w});
    CHECK(res.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("parallel chunk decomposition covers the range exactly once") {
    const std::size_t n = 12345;
    std::vector<std::atomic<int>> hits(n);
    parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) hits[i].fetch_add(1);
    });
    for (std::size_t i = 0; i < n; ++i) REQUIRE(hits[i].load() == 1);
    CHECK(worker_count() >= 1);
}

TEST_CASE("error taxonomy derives from runtime_error") {
    CHECK_THROWS_AS(throw domain_error("x"), std::runtime_error);
    CHECK_THROWS_AS(throw config_error("x"), std::runtime_error);
    CHECK_THROWS_AS(throw divergence_error("x"), std::runtime_error);
}
