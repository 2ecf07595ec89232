#include "axib/special.hpp"

#include <cmath>
#include <vector>

#include "axib/errors.hpp"
#include "axib/quadrature.hpp"

namespace axib {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double sqrt_pi = 1.77245385090551602730;

// Breakpoints hugging a peak of width w at the origin of [0, hi]; the
// geometric ladder guarantees the first panel pass resolves the peak.
std::vector<double> peak_breaks(double w, double hi) {
    std::vector<double> b;
    for (double c : {1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0}) {
        const double x = c * w;
        if (x < hi) b.push_back(x);
    }
    b.push_back(hi * 0.5);
    return b;
}

// ------------------------------------------------------------
// F family
// ------------------------------------------------------------

// Two-term complete-elliptic expansions in the complementary modulus give
// F(s) for small s with O(s^2 log s) error; far better than the bare
// (1/2) log(1/s) + log 8 - 2 form at the switch point.
double F_series_small(double s) {
    const double mp = s / (4.0 + s);
    const double L = 0.5 * std::log(16.0 / mp);
    const double K = L + 0.25 * mp * (L - 1.0);
    const double E = 1.0 + 0.5 * mp * (L - 0.5);
    return ((1.0 + mp) * K - 2.0 * E) / std::sqrt(1.0 - mp);
}

double F_series_large(double s) {
    const double is = 1.0 / s;
    return pi * std::pow(s, -1.5) * (0.5 - 1.5 * is + (75.0 / 16.0) * is * is);
}

double Fp_series_small(double s) {
    return -0.5 / s + (3.0 / 32.0) * std::log(64.0 / s) - 5.0 / 32.0;
}

double Fp_series_large(double s) {
    return pi * std::pow(s, -2.5) * (-0.75 + 3.75 / s);
}

// 2 (1 - cos a) written as 4 sin^2(a/2); the subtraction form loses eight
// digits near the peak and turns the error estimator into a noise meter.
double chord2(double a) {
    const double sh = std::sin(0.5 * a);
    return 4.0 * sh * sh;
}

double F_quad(double s, double rel_tol) {
    if (s <= 16.0) {
        auto f = [s](double a) { return std::cos(a) / std::sqrt(chord2(a) + s); };
        return integrate(f, 0.0, pi, rel_tol, peak_breaks(std::sqrt(s), pi)).value;
    }
    // Subtracted form: int cos(a) da = 0, so the s^{-1/2} baseline drops out
    // before the floating-point sum can cancel it.
    const double inv_sqrt_s = 1.0 / std::sqrt(s);
    auto f = [s, inv_sqrt_s](double a) {
        return std::cos(a) * inv_sqrt_s * std::expm1(-0.5 * std::log1p(chord2(a) / s));
    };
    return integrate(f, 0.0, pi, rel_tol, {pi / 2}).value;
}

double Fp_quad(double s, double rel_tol) {
    if (s <= 16.0) {
        auto f = [s](double a) { return std::cos(a) * std::pow(chord2(a) + s, -1.5); };
        return -0.5 * integrate(f, 0.0, pi, rel_tol, peak_breaks(std::sqrt(s), pi)).value;
    }
    const double c = std::pow(s, -1.5);
    auto f = [s, c](double a) {
        return std::cos(a) * c * std::expm1(-1.5 * std::log1p(chord2(a) / s));
    };
    return -0.5 * integrate(f, 0.0, pi, rel_tol, {pi / 2}).value;
}

// ------------------------------------------------------------
// N family (integrands over [0, pi/2], doubled by symmetry)
// ------------------------------------------------------------

double N1_series_small(double t) { return 1.0 - 0.75 * t - (15.0 / 32.0) * t * t; }

double N1_series_large(double t) {
    const double it = 1.0 / t;
    return 0.25 * sqrt_pi * std::pow(t, -1.5) * (1.0 - 0.5 * it + (5.0 / 32.0) * it * it);
}

double N2_series_small(double t) { return 1.0 + 0.25 * t + (9.0 / 32.0) * t * t; }

double N2_series_large(double t) {
    const double it = 1.0 / t;
    return std::sqrt(pi / t) * (1.0 - 0.5 * it + (3.0 / 16.0) * it * it);
}

double N1p_series_small(double t) { return -0.75 - (15.0 / 16.0) * t; }

double N1p_series_large(double t) {
    return -0.375 * sqrt_pi * std::pow(t, -2.5) * (1.0 - (5.0 / 6.0) / t);
}

double N2p_series_small(double t) { return 0.25 + (9.0 / 16.0) * t; }

double N2p_series_large(double t) {
    const double it = 1.0 / t;
    return -0.5 * sqrt_pi * std::pow(t, -1.5) * (1.0 - 1.5 * it + (15.0 / 16.0) * it * it);
}

double N1_quad(double t, double rel_tol) {
    const double pref = 2.0 / std::sqrt(pi * t);
    if (t <= 4.0) {
        auto f = [t](double a) {
            const double s = std::sin(a);
            return std::exp(-s * s / t) * std::cos(2.0 * a);
        };
        return pref * integrate(f, 0.0, pi / 2, rel_tol, peak_breaks(std::sqrt(t), pi / 2)).value;
    }
    // int cos(2a) da = 0 over the window, so subtract the unit baseline.
    auto f = [t](double a) {
        const double s = std::sin(a);
        return std::expm1(-s * s / t) * std::cos(2.0 * a);
    };
    return pref * integrate(f, 0.0, pi / 2, rel_tol).value;
}

double N2_quad(double t, double rel_tol) {
    const double pref = 2.0 / std::sqrt(pi * t);
    auto f = [t](double a) {
        const double s = std::sin(a);
        return std::exp(-s * s / t);
    };
    std::vector<double> brk = (t <= 4.0) ? peak_breaks(std::sqrt(t), pi / 2) : std::vector<double>{};
    return pref * integrate(f, 0.0, pi / 2, rel_tol, brk).value;
}

double N1p_quad(double t, double rel_tol) {
    const double pref = 2.0 / std::sqrt(pi * t);
    if (t <= 4.0) {
        auto f = [t](double a) {
            const double s2 = std::sin(a) * std::sin(a);
            return (s2 / (t * t) - 0.5 / t) * std::exp(-s2 / t) * std::cos(2.0 * a);
        };
        return pref * integrate(f, 0.0, pi / 2, rel_tol, peak_breaks(std::sqrt(t), pi / 2)).value;
    }
    // Split so each part has a nonvanishing leading integral: the -1/(2t)
    // piece rides on cos(2a) whose plain integral is zero.
    auto f1 = [t](double a) {
        const double s2 = std::sin(a) * std::sin(a);
        return (s2 / (t * t)) * std::exp(-s2 / t) * std::cos(2.0 * a);
    };
    auto f2 = [t](double a) {
        const double s2 = std::sin(a) * std::sin(a);
        return std::expm1(-s2 / t) * std::cos(2.0 * a);
    };
    const double p1 = integrate(f1, 0.0, pi / 2, rel_tol).value;
    const double p2 = integrate(f2, 0.0, pi / 2, rel_tol).value;
    return pref * (p1 - 0.5 / t * p2);
}

double N2p_quad(double t, double rel_tol) {
    const double pref = 2.0 / std::sqrt(pi * t);
    auto f = [t](double a) {
        const double s2 = std::sin(a) * std::sin(a);
        return (s2 / (t * t) - 0.5 / t) * std::exp(-s2 / t);
    };
    std::vector<double> brk = (t <= 4.0) ? peak_breaks(std::sqrt(t), pi / 2) : std::vector<double>{};
    return pref * integrate(f, 0.0, pi / 2, rel_tol, brk).value;
}

// Switch thresholds for the derivative evaluators: the quadrature loses
// digits to interior cancellation below ~1e-3 while the two-term series is
// already at ~1e-6 there, so the crossover sits higher than t_small.
constexpr double tp_small = 1e-3;

}  // namespace

void check_config(const SpecialFnConfig& cfg) {
    if (!(cfg.s_small > 0.0) || !(cfg.s_small < cfg.s_large))
        throw config_error("special: need 0 < s_small < s_large");
    if (!(cfg.t_small > 0.0) || !(cfg.t_small < cfg.t_large))
        throw config_error("special: need 0 < t_small < t_large");
    if (!(cfg.rel_tol > 0.0) || cfg.rel_tol > 1e-4)
        throw config_error("special: rel_tol must lie in (0, 1e-4]");
}

double eval_F(double s, const SpecialFnConfig& cfg) {
    if (!(s > 0.0)) throw domain_error("eval_F: s must be positive");
    check_config(cfg);
    if (s < cfg.s_small) return F_series_small(s);
    if (s > cfg.s_large) return F_series_large(s);
    return F_quad(s, cfg.rel_tol);
}

double eval_F_prime(double s, const SpecialFnConfig& cfg) {
    if (!(s > 0.0)) throw domain_error("eval_F_prime: s must be positive");
    check_config(cfg);
    if (s < cfg.s_small) return Fp_series_small(s);
    if (s > cfg.s_large) return Fp_series_large(s);
    return Fp_quad(s, cfg.rel_tol);
}

double eval_N1(double t, const SpecialFnConfig& cfg) {
    if (!(t > 0.0)) throw domain_error("eval_N1: t must be positive");
    check_config(cfg);
    if (t < cfg.t_small) return N1_series_small(t);
    if (t > cfg.t_large) return N1_series_large(t);
    return N1_quad(t, cfg.rel_tol);
}

double eval_N2(double t, const SpecialFnConfig& cfg) {
    if (!(t > 0.0)) throw domain_error("eval_N2: t must be positive");
    check_config(cfg);
    if (t < cfg.t_small) return N2_series_small(t);
    if (t > cfg.t_large) return N2_series_large(t);
    return N2_quad(t, cfg.rel_tol);
}

double eval_N1_prime(double t, const SpecialFnConfig& cfg) {
    if (!(t > 0.0)) throw domain_error("eval_N1_prime: t must be positive");
    check_config(cfg);
    if (t < tp_small) return N1p_series_small(t);
    if (t > cfg.t_large) return N1p_series_large(t);
    return N1p_quad(t, cfg.rel_tol);
}

double eval_N2_prime(double t, const SpecialFnConfig& cfg) {
    if (!(t > 0.0)) throw domain_error("eval_N2_prime: t must be positive");
    check_config(cfg);
    if (t < tp_small) return N2p_series_small(t);
    if (t > cfg.t_large) return N2p_series_large(t);
    return N2p_quad(t, cfg.rel_tol);
}

// ============================================================
// Tabulated fast path
// ============================================================

namespace {

// Value transform applied before tabulation. Quantities with a fixed sign
// are stored as ln|f| so the huge dynamic range interpolates smoothly; a
// sign-changing quantity must stay linear.
enum class Store { log_pos, log_neg, linear };

// Cubic Hermite table of g(x) = transform(fn(e^x)) on a uniform x grid.
// Nodal slopes come from a five-point finite difference of nodal values
// (O(h^4), ~3e-10 here), keeping the build free of second-derivative
// quadratures while preserving ~5e-11 interpolation error.
struct LogTable {
    double x0 = 0.0, h = 0.0;
    std::vector<double> g, dg;
    Store mode = Store::log_pos;

    template <typename Fn>
    void build(double lo, double hi, double step, Store m, const Fn& fn) {
        mode = m;
        x0 = std::log(lo);
        const double x1 = std::log(hi);
        const std::size_t n = static_cast<std::size_t>(std::ceil((x1 - x0) / step)) + 1;
        h = (x1 - x0) / static_cast<double>(n - 1);

        std::vector<double> raw(n + 4);
        for (std::size_t k = 0; k < n + 4; ++k) {
            const double x = x0 + (static_cast<double>(k) - 2.0) * h;
            double v = fn(std::exp(x));
            if (mode != Store::linear) {
                if (mode == Store::log_neg) v = -v;
                if (!(v > 0.0))
                    throw domain_error("special table: log transform needs one-signed values");
                v = std::log(v);
            }
            raw[k] = v;
        }
        g.resize(n);
        dg.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            g[k] = raw[k + 2];
            dg[k] = (8.0 * (raw[k + 3] - raw[k + 1]) - (raw[k + 4] - raw[k])) / (12.0 * h);
        }
    }

    bool covers(double x) const {
        return x >= x0 && x <= x0 + h * static_cast<double>(g.size() - 1);
    }

    double eval(double x) const {
        const double u = (x - x0) / h;
        std::size_t c = static_cast<std::size_t>(u);
        if (c >= g.size() - 1) c = g.size() - 2;
        const double s = u - static_cast<double>(c);
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        const double val = h00 * g[c] + h10 * h * dg[c] + h01 * g[c + 1] + h11 * h * dg[c + 1];
        if (mode == Store::linear) return val;
        return mode == Store::log_neg ? -std::exp(val) : std::exp(val);
    }
};

struct Tables {
    LogTable F, Fp, N1, N2, N1p, N2p;
};

const Tables& tables() {
    static const Tables t = [] {
        const SpecialFnConfig cfg;
        Tables tb;
        const double step = 0.01;
        tb.F.build(cfg.s_small, cfg.s_large, step, Store::log_pos,
                   [&](double s) { return eval_F(s, cfg); });
        tb.Fp.build(cfg.s_small, cfg.s_large, step, Store::log_neg,
                    [&](double s) { return eval_F_prime(s, cfg); });
        tb.N1.build(cfg.t_small, cfg.t_large, step, Store::log_pos,
                    [&](double t) { return eval_N1(t, cfg); });
        tb.N2.build(cfg.t_small, cfg.t_large, step, Store::log_pos,
                    [&](double t) { return eval_N2(t, cfg); });
        tb.N1p.build(tp_small, cfg.t_large, step, Store::log_neg,
                     [&](double t) { return eval_N1_prime(t, cfg); });
        tb.N2p.build(tp_small, cfg.t_large, step, Store::linear,
                     [&](double t) { return eval_N2_prime(t, cfg); });
        return tb;
    }();
    return t;
}

}  // namespace

void warm_special_tables() { (void)tables(); }

double fast_F(double s) {
    const double x = std::log(s);
    const LogTable& tb = tables().F;
    return tb.covers(x) ? tb.eval(x) : eval_F(s);
}

double fast_F_prime(double s) {
    const double x = std::log(s);
    const LogTable& tb = tables().Fp;
    return tb.covers(x) ? tb.eval(x) : eval_F_prime(s);
}

double fast_N1(double t) {
    const double x = std::log(t);
    const LogTable& tb = tables().N1;
    return tb.covers(x) ? tb.eval(x) : eval_N1(t);
}

double fast_N2(double t) {
    const double x = std::log(t);
    const LogTable& tb = tables().N2;
    return tb.covers(x) ? tb.eval(x) : eval_N2(t);
}

double fast_N1_prime(double t) {
    const double x = std::log(t);
    const LogTable& tb = tables().N1p;
    return tb.covers(x) ? tb.eval(x) : eval_N1_prime(t);
}

double fast_N2_prime(double t) {
    const double x = std::log(t);
    const LogTable& tb = tables().N2p;
    return tb.covers(x) ? tb.eval(x) : eval_N2_prime(t);
}

}  // namespace axib
