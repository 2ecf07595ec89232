#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "axib/grid.hpp"

namespace axib {

// ============================================================
// Estimate verification: decay fits, operator-norm probes,
// grid-convergence studies
// ============================================================

// One (time, value) observation of a decaying quantity.
struct DecaySample {
    double t = 0.0;
    double value = 0.0;
};

// Closed time interval selecting the samples a fit may use.
struct FitWindow {
    double t_min = 0.0;
    double t_max = 0.0;
};

// Least-squares fit of log(value) against log(t) over the samples inside the
// window; returns (slope, constant) with value ~ constant * t^slope. Requires
// at least four samples in the window, each with t > 0 and a finite positive
// value; throws domain_error otherwise.
std::pair<double, double> fit_decay(const std::vector<DecaySample>& samples,
                                    FitWindow window);

// Verdict on one decay-rate claim. pass holds exactly when the fitted slope
// sits within tolerance of the predicted one and every sample is finite.
struct DecayReport {
    std::string quantity;
    double p = 0.0;
    double fitted_slope = 0.0;
    double predicted_slope = 0.0;
    double tolerance = 0.0;
    double measured_constant = 0.0;
    bool pass = false;
    std::vector<DecaySample> samples;
};

// Fits the last half-decade [t_max / sqrt(10), t_max] of the samples, the
// default window that discards early transients, and assembles the report.
// Fit preconditions apply to the samples inside that window.
DecayReport assess_decay(std::string quantity, double p,
                         std::vector<DecaySample> samples,
                         double predicted_slope, double tolerance);

// Operators the norm probe knows how to drive. S2Heat acts on AXISYM density
// fields, S1Vorticity on PLANAR vorticity fields, BiotSavart maps PLANAR
// vorticity to the velocity magnitude (its ratios do not depend on t).
enum class ProbeOperator { S2Heat, S1Vorticity, BiotSavart };

// Stable name used in reports and CSV output.
std::string probe_operator_name(ProbeOperator op);

// Recipe entry behind one probe-ensemble member. Gaussian members carry
// their parameters (centers already scaled to the grid extents); the rough
// member reports rough = true with zeroed parameters. length_scale is the
// Gaussian's 1/e half-width, the resolution a grid must support for the
// member's ratios to be trusted.
struct ProbeMember {
    double amplitude = 0.0;
    double width = 0.0;  // exponential rate a in amp * exp(-a |x - x0|^2)
    double r0 = 0.0;
    double z0 = 0.0;
    bool rough = false;
    double length_scale() const { return rough ? 0.0 : 1.0 / std::sqrt(width); }
};

// The twelve-member recipe for a given grid and measure family: eleven
// Gaussians spanning centers, widths, and both signs, plus one rough member.
std::vector<ProbeMember> probe_ensemble_spec(const Grid& g, Measure tag);

// Materializes the recipe: Gaussians from their parameters, the rough member
// from uniform random cell values smoothed once by a 3x3 average.
// Deterministic for a given seed.
std::vector<ScalarField> probe_ensemble(const Grid& g, Measure tag,
                                        std::uint64_t seed);

// One probe evaluation: t^rate * ||op(t, f)||_q / ||f||_p for member f.
struct ProbeSample {
    std::size_t member = 0;
    double t = 0.0;
    double ratio = 0.0;
};

// Empirical operator-norm report. constant is the maximum ratio over all
// members and sampled times; because the ensemble is finite it is a lower
// bound for the true operator norm, never a certified value.
struct ProbeReport {
    ProbeOperator op = ProbeOperator::S2Heat;
    double p = 0.0;
    double q = 0.0;
    double rate = 0.0;
    std::uint64_t seed = 0;
    double constant = 0.0;
    std::vector<double> member_best;  // max ratio per ensemble member
    std::vector<ProbeSample> samples;
};

// Probes op over the ensemble at the given times (ignored for BiotSavart,
// which is sampled once per member at t = 0). Norm conventions: AXISYM
// fields measure in the full 3-D L^p family (azimuthal factor included;
// p = 1 uses the conservative mass quadrature so mass-preserving kernels
// score exactly 1), PLANAR fields in the half-plane dr dz family. The seed
// is recorded in the report verbatim. Throws domain_error on an empty
// ensemble, a member with zero input norm or the wrong measure tag, p or q
// below 1, or non-positive times for the semigroup operators.
ProbeReport operator_norm_probe(ProbeOperator op,
                                const std::vector<ScalarField>& ensemble,
                                double p, double q, double rate,
                                const std::vector<double>& times,
                                std::uint64_t seed = 0);

// Observed convergence order of a scalar result on a refinement ladder.
struct ConvergenceReport {
    std::vector<double> values;  // one per grid, coarse to fine
    std::vector<double> orders;  // log2 ratios of successive differences
    double order = 0.0;          // finest entry of orders
};

// Richardson-style order from successive differences: with values v_k on
// grids doubling in resolution, order_j = log2(|v_{j+1} - v_j| /
// |v_{j+2} - v_{j+1}|). A vanishing fine difference reports the infinity
// sentinel (the ladder has converged to roundoff or the operation is exactly
// grid-independent). Requires at least three values.
ConvergenceReport observed_order(const std::vector<double>& values);

// Evaluates eval on each grid of the ladder and reports the observed order.
// The ladder must hold at least three grids with identical extents, each
// doubling both resolutions of the previous one.
ConvergenceReport grid_convergence(const std::function<double(const Grid&)>& eval,
                                   const std::vector<Grid>& ladder);

}  // namespace axib
