#pragma once

#include <cstddef>

namespace axib {

// ============================================================
// Kernel special functions
// ============================================================
//
// F(s)  = int_0^pi cos(a) (2(1 - cos a) + s)^{-1/2} da         (s > 0)
// N1(t) = (pi t)^{-1/2} int_{-pi/2}^{pi/2} e^{-sin^2 a / t} cos 2a da
// N2(t) = same without the cos 2a factor.
//
// Each evaluator runs adaptive quadrature in a core window and switches to
// asymptotic series outside it; the two regimes are cross-checked at the
// switch points by the unit tests. Large arguments use subtracted integrands
// (the mean-zero factors cos a and cos 2a make the plain sums cancel
// catastrophically).

struct SpecialFnConfig {
    double rel_tol = 1e-10;
    double s_small = 1e-8;
    double s_large = 1e8;
    double t_small = 1e-6;
    double t_large = 1e6;
};

// Validates the threshold ordering; throws config_error on nonsense.
void check_config(const SpecialFnConfig& cfg);

double eval_F(double s, const SpecialFnConfig& cfg = {});
double eval_F_prime(double s, const SpecialFnConfig& cfg = {});
double eval_N1(double t, const SpecialFnConfig& cfg = {});
double eval_N2(double t, const SpecialFnConfig& cfg = {});

// Derivatives in t, by differentiation under the integral sign; used by the
// divergence-composed propagator kernels.
double eval_N1_prime(double t, const SpecialFnConfig& cfg = {});
double eval_N2_prime(double t, const SpecialFnConfig& cfg = {});

// ============================================================
// Fast tabulated evaluators
// ============================================================
//
// Kernel assembly evaluates these functions millions of times at arguments
// spanning many decades. The fast_* variants interpolate cubic Hermite
// tables of the log-transformed values on a uniform ln-argument grid
// (exact nodal derivatives), built lazily from the slow evaluators; outside
// the tabulated window they fall through to the series branches. Relative
// interpolation error is ~5e-11, checked against the slow path in tests.

double fast_F(double s);
double fast_F_prime(double s);
double fast_N1(double t);
double fast_N2(double t);
double fast_N1_prime(double t);
double fast_N2_prime(double t);

// Forces table construction (otherwise built on first use).
void warm_special_tables();

}  // namespace axib
