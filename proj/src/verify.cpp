#include "axib/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "axib/biot_savart.hpp"
#include "axib/errors.hpp"
#include "axib/norms.hpp"
#include "axib/semigroup.hpp"

namespace axib {

namespace {

constexpr double two_pi = 6.28318530717958647692;

ScalarField abs_field(const ScalarField& f) {
    ScalarField out = f;
    for (double& x : out.values) x = std::fabs(x);
    return out;
}

// L^p norm in the family the probe measures: AXISYM fields in the full 3-D
// family (the azimuthal integral contributes (2 pi)^{1/p}; p = 1 uses the
// conservative mass quadrature), PLANAR fields against dr dz.
double probe_norm(const ScalarField& f, double p) {
    if (std::isinf(p)) return lp_norm(f, p_inf);
    if (f.tag == Measure::PLANAR) return lp_norm(f, p);
    if (p == 1.0) return two_pi * total_mass(abs_field(f));
    return std::pow(two_pi, 1.0 / p) * lp_norm(f, p);
}

ScalarField magnitude_field(const VelocityField& v) {
    ScalarField out(v.grid, Measure::PLANAR);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = std::hypot(v.vr[k], v.vz[k]);
    return out;
}

void check_norm_index(double p, const char* what) {
    if (std::isnan(p) || p < 1.0)
        throw domain_error(std::string(what) + " must be at least 1");
}

}  // namespace

std::pair<double, double> fit_decay(const std::vector<DecaySample>& samples,
                                    FitWindow window) {
    std::vector<double> x, y;
    for (const DecaySample& s : samples) {
        if (s.t < window.t_min || s.t > window.t_max) continue;
        if (!(s.t > 0.0))
            throw domain_error("fit_decay: sample times in the window must be positive");
        if (!std::isfinite(s.value) || !(s.value > 0.0))
            throw domain_error(
                "fit_decay: sample values in the window must be finite and positive");
        x.push_back(std::log(s.t));
        y.push_back(std::log(s.value));
    }
    if (x.size() < 4)
        throw domain_error("fit_decay: needs at least four samples in the window");

    const double n = static_cast<double>(x.size());
    double xb = 0.0, yb = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        xb += x[k];
        yb += y[k];
    }
    xb /= n;
    yb /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - xb) * (y[k] - yb);
        sxx += (x[k] - xb) * (x[k] - xb);
    }
    if (sxx == 0.0)
        throw domain_error("fit_decay: sample times in the window are all equal");
    const double slope = sxy / sxx;
    return {slope, std::exp(yb - slope * xb)};
}

DecayReport assess_decay(std::string quantity, double p,
                         std::vector<DecaySample> samples,
                         double predicted_slope, double tolerance) {
    if (samples.empty()) throw domain_error("assess_decay: no samples");
    double t_max = samples.front().t;
    for (const DecaySample& s : samples) t_max = std::max(t_max, s.t);

    DecayReport rep;
    rep.quantity = std::move(quantity);
    rep.p = p;
    rep.predicted_slope = predicted_slope;
    rep.tolerance = tolerance;

    const FitWindow window{t_max / std::sqrt(10.0), t_max};
    const auto [slope, constant] = fit_decay(samples, window);
    rep.fitted_slope = slope;
    rep.measured_constant = constant;

    bool finite = true;
    for (const DecaySample& s : samples)
        finite = finite && std::isfinite(s.t) && std::isfinite(s.value);
    rep.pass = finite && std::fabs(slope - predicted_slope) <= tolerance;
    rep.samples = std::move(samples);
    return rep;
}

std::string probe_operator_name(ProbeOperator op) {
    switch (op) {
        case ProbeOperator::S2Heat: return "S2_heat";
        case ProbeOperator::S1Vorticity: return "S1_vorticity";
        case ProbeOperator::BiotSavart: return "biot_savart";
    }
    throw domain_error("probe_operator_name: unknown operator");
}

std::vector<ProbeMember> probe_ensemble_spec(const Grid& g, Measure tag) {
    struct Bump {
        double amp, a, fr, fz;  // center at (fr * r_max, fz * z_half)
    };
    // Centers are fractions of the extents so the recipe scales with the
    // domain; widths are absolute so refinement ladders see fixed data. The
    // AXISYM list keeps a very narrow blob near the axis, where a density
    // concentrates into the sharpest 3-D heat peaks; the PLANAR list keeps
    // its narrow blobs in the bulk, since smooth vorticity vanishes at the
    // axis and the velocity estimates are probed away from it. Both lists
    // park a narrow member deep in the wings so the weighted semigroup
    // ratios stay saturated across the sampled decade of times.
    static const Bump axi_bumps[] = {
        {+1.0, 2.0, 0.125, 0.0},   {-1.0, 2.0, 0.125, 0.0},
        {+0.7, 0.5, 0.25, 0.0},    {-0.7, 0.5, 0.25, 0.1875},
        {+1.0, 8.0, 0.05, 0.0},    {+1.0, 32.0, 0.0, 0.0},
        {-0.5, 1.0, 0.25, -0.25},  {+0.3, 0.25, 0.0625, 0.0},
        {+1.0, 4.0, 0.125, 0.125}, {-1.0, 4.0, 0.04, -0.125},
        {+1.0, 24.0, 0.65, 0.0},
    };
    static const Bump planar_bumps[] = {
        {+1.0, 2.0, 0.125, 0.0},   {-1.0, 2.0, 0.125, 0.0},
        {+0.7, 0.5, 0.25, 0.0},    {-0.7, 0.5, 0.25, 0.1875},
        {+1.0, 8.0, 0.2, 0.0},     {+1.0, 24.0, 0.65, 0.0},
        {-0.5, 1.0, 0.25, -0.25},  {+0.3, 0.25, 0.25, 0.0},
        {+1.0, 4.0, 0.125, 0.125}, {-1.0, 4.0, 0.2, -0.125},
        {+0.8, 1.0, 0.33, 0.0},
    };

    std::vector<ProbeMember> out;
    out.reserve(12);
    for (const Bump& b : (tag == Measure::AXISYM ? axi_bumps : planar_bumps))
        out.push_back({b.amp, b.a, b.fr * g.r_max, b.fz * g.z_half, false});
    out.push_back({0.0, 0.0, 0.0, 0.0, true});
    return out;
}

std::vector<ScalarField> probe_ensemble(const Grid& g, Measure tag,
                                        std::uint64_t seed) {
    std::vector<ScalarField> out;
    out.reserve(12);
    for (const ProbeMember& b : probe_ensemble_spec(g, tag))
        if (!b.rough)
            out.push_back(gaussian_field(g, tag, b.amplitude, b.width, b.r0, b.z0));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    ScalarField raw(g, tag);
    for (double& x : raw.values) x = uni(rng);
    ScalarField rough(g, tag);
    for (std::size_t i = 0; i < g.n_r; ++i)
        for (std::size_t j = 0; j < g.n_z; ++j) {
            double acc = 0.0;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    std::size_t ii = i, jj = j;
                    if (di < 0) ii = i == 0 ? 0 : i - 1;
                    if (di > 0) ii = i + 1 == g.n_r ? i : i + 1;
                    if (dj < 0) jj = j == 0 ? 0 : j - 1;
                    if (dj > 0) jj = j + 1 == g.n_z ? j : j + 1;
                    acc += raw.at(ii, jj);
                }
            rough.at(i, j) = acc / 9.0;
        }
    out.push_back(std::move(rough));
    return out;
}

ProbeReport operator_norm_probe(ProbeOperator op,
                                const std::vector<ScalarField>& ensemble,
                                double p, double q, double rate,
                                const std::vector<double>& times,
                                std::uint64_t seed) {
    if (ensemble.empty()) throw domain_error("operator_norm_probe: empty ensemble");
    check_norm_index(p, "operator_norm_probe: p");
    check_norm_index(q, "operator_norm_probe: q");
    if (!std::isfinite(rate))
        throw domain_error("operator_norm_probe: rate must be finite");

    const Measure want_tag =
        op == ProbeOperator::S2Heat ? Measure::AXISYM : Measure::PLANAR;
    for (const ScalarField& f : ensemble) {
        if (f.tag != want_tag)
            throw domain_error("operator_norm_probe: ensemble member has the wrong measure tag");
        if (!(f.grid == ensemble.front().grid))
            throw domain_error("operator_norm_probe: ensemble members live on different grids");
    }

    std::vector<double> eval_times = times;
    if (op == ProbeOperator::BiotSavart) {
        eval_times.assign(1, 0.0);
    } else {
        if (eval_times.empty())
            throw domain_error("operator_norm_probe: no sample times");
        for (double t : eval_times)
            if (!std::isfinite(t) || !(t > 0.0))
                throw domain_error("operator_norm_probe: sample times must be positive");
    }

    ProbeReport rep;
    rep.op = op;
    rep.p = p;
    rep.q = q;
    rep.rate = rate;
    rep.seed = seed;
    rep.member_best.assign(ensemble.size(), 0.0);

    // Members are independent of one another; the loop body only writes its
    // own report rows.
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
        const ScalarField& f = ensemble[m];
        const double denom = probe_norm(f, p);
        if (denom == 0.0)
            throw domain_error("operator_norm_probe: ensemble member has zero norm");

        for (double t : eval_times) {
            double num = 0.0;
            switch (op) {
                case ProbeOperator::S2Heat:
                    num = probe_norm(apply_S2_axi(t, f), q);
                    break;
                case ProbeOperator::S1Vorticity:
                    num = probe_norm(apply_S1(t, f), q);
                    break;
                case ProbeOperator::BiotSavart:
                    num = probe_norm(magnitude_field(velocity_from_vorticity(f)), q);
                    break;
            }
            const double weight = rate == 0.0 ? 1.0 : std::pow(t, rate);
            const double ratio = weight * num / denom;
            rep.samples.push_back({m, t, ratio});
            rep.member_best[m] = std::max(rep.member_best[m], ratio);
        }
        rep.constant = std::max(rep.constant, rep.member_best[m]);
    }
    return rep;
}

ConvergenceReport observed_order(const std::vector<double>& values) {
    if (values.size() < 3)
        throw domain_error("observed_order: needs at least three ladder values");

    ConvergenceReport rep;
    rep.values = values;
    std::vector<double> diffs(values.size() - 1);
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        diffs[k] = std::fabs(values[k + 1] - values[k]);

    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
        double ord;
        if (diffs[k + 1] == 0.0)
            ord = inf;
        else if (diffs[k] == 0.0)
            ord = -inf;
        else
            ord = std::log2(diffs[k] / diffs[k + 1]);
        rep.orders.push_back(ord);
    }
    rep.order = rep.orders.back();
    return rep;
}

ConvergenceReport grid_convergence(const std::function<double(const Grid&)>& eval,
                                   const std::vector<Grid>& ladder) {
    if (!eval) throw domain_error("grid_convergence: empty evaluation");
    if (ladder.size() < 3)
        throw domain_error("grid_convergence: needs at least three grids");
    for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
        const Grid& c = ladder[k];
        const Grid& f = ladder[k + 1];
        if (f.n_r != 2 * c.n_r || f.n_z != 2 * c.n_z)
            throw domain_error("grid_convergence: each grid must double both resolutions");
        if (f.r_max != c.r_max || f.z_half != c.z_half)
            throw domain_error("grid_convergence: ladder grids must share extents");
    }

    std::vector<double> values;
    values.reserve(ladder.size());
    for (const Grid& g : ladder) values.push_back(eval(g));
    return observed_order(values);
}

}  // namespace axib
