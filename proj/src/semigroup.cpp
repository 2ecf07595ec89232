#include "axib/semigroup.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <vector>

#include "axib/norms.hpp"
#include "axib/special.hpp"
#include "axib/threading.hpp"

namespace axib {

namespace {

constexpr double pi = 3.14159265358979323846;

// The Gaussian factor exp(-d^2/4t) has standard deviation sqrt(2t); beyond
// 8 standard deviations it is below 1e-14 of its mass and is dropped.
double gauss_cut(double t) { return 8.0 * std::sqrt(2.0 * t); }

void check_time(double t, const char* op) {
    if (!(t > 0.0)) throw domain_error(std::string(op) + ": t must be > 0");
}

std::atomic<bool> g_warned_small_t{false};

void warn_small_t(const char* op, double t, double floor_t, const char* action) {
    if (g_warned_small_t.exchange(true))
        return;
    std::fprintf(stderr,
                 "[semigroup] %s: t = %.6g is below the resolvable floor %.6g "
                 "(kernel narrower than a cell); %s. Further occurrences are silent.\n",
                 op, t, floor_t, action);
}

// Gaussian factor matrix on a one-dimensional node array: G[i][j] =
// exp(-(x_i - x_j)^2 / 4t) with each column rescaled so its discrete sum
// matches the exact continuum integral of the column's Gaussian. For a
// resolved kernel the rescale is a no-op to rounding; when the kernel is
// narrower than a cell it keeps the discrete operator a partition of the
// correct mass, so the t -> 0 limit is the identity instead of an
// O(h/sqrt(t)) misweight.
//
// The target integral treats the two ends differently. An artificial
// truncation end (the z edges, the outer r edge) folds its tail back in
// (reflection), which keeps the z-direction heat flow exactly conservative.
// The axis end of the r array is a physical boundary: there the target is
// the honest half-line integral, because the kernel profile itself encodes
// the axis behavior and folding would double the near-axis columns.
std::vector<double> gauss_norm(const std::vector<double>& xs, double h, double t,
                               bool honest_lower_end) {
    const std::size_t n = xs.size();
    std::vector<double> G(n * n, 0.0);
    const double cut = gauss_cut(t);
    const double inv4t = 0.25 / t;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = xs[i] - xs[j];
            if (std::abs(d) > cut) continue;
            G[i * n + j] = std::exp(-d * d * inv4t);
        }

    const double root_pit = std::sqrt(pi * t);
    const double half_width = 0.5 / std::sqrt(t);
    for (std::size_t j = 0; j < n; ++j) {
        const double lower = honest_lower_end ? std::erf(xs[j] * half_width) : 1.0;
        const double target = root_pit * (1.0 + lower) / h;
        KahanSum s;
        for (std::size_t i = 0; i < n; ++i) s.add(G[i * n + j]);
        const double scale = target / s.value();
        for (std::size_t i = 0; i < n; ++i) G[i * n + j] *= scale;
    }
    return G;
}

std::vector<double> radial_nodes(const Grid& g) {
    std::vector<double> xs(g.n_r);
    for (std::size_t i = 0; i < g.n_r; ++i) xs[i] = g.r(i);
    return xs;
}

std::vector<double> z_nodes(const Grid& g) {
    std::vector<double> xs(g.n_z);
    for (std::size_t j = 0; j < g.n_z; ++j) xs[j] = g.z(j);
    return xs;
}

// Radial kernel matrices, row-major n_r x n_r, target index i, source j:
// the normalized Gaussian factor times the smooth kernel profile.
enum class RadialKind { S1, S2, S1_DIV, S2_DIV, S2_DIV_AXIS };

std::vector<double> build_A(const Grid& g, double t, RadialKind kind,
                            const std::vector<double>& G) {
    const std::size_t n = g.n_r;
    std::vector<double> A(n * n, 0.0);
    const double inv2t = 0.5 / t;

    for (std::size_t i = 0; i < n; ++i) {
        const double r = g.r(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double e = G[i * n + j];
            if (e == 0.0) continue;
            const double rt = g.r(j);
            const double d = r - rt;
            const double th = t / (r * rt);
            const double ratio = std::sqrt(rt / r);
            double v = 0.0;
            switch (kind) {
                case RadialKind::S1:
                    v = ratio * fast_N1(th);
                    break;
                case RadialKind::S2:
                    v = ratio * fast_N2(th);
                    break;
                case RadialKind::S1_DIV:
                    v = ratio * ((th / rt) * fast_N1_prime(th) -
                                 (0.5 / rt + d * inv2t) * fast_N1(th));
                    break;
                case RadialKind::S2_DIV:
                    v = ratio * ((th / rt) * fast_N2_prime(th) -
                                 (0.5 / rt + d * inv2t) * fast_N2(th));
                    break;
                case RadialKind::S2_DIV_AXIS:
                    v = fast_N2(th) / std::sqrt(r * rt);
                    break;
            }
            A[i * n + j] = v * e;
        }
    }
    return A;
}

// Rescales each source column of the S2 radial matrix so that the discrete
// weighted mass functional (the one total_mass computes) is transported
// exactly: sum_i W_i r_i A[i][j] dr == W_j r_j sqrt(4 pi t). Combined with
// the z-column normalization this makes mass conservation hold to rounding.
void normalize_S2_columns(std::vector<double>& A, const Grid& g, double t) {
    const std::size_t n = g.n_r;
    const double root = std::sqrt(4.0 * pi * t);
    for (std::size_t j = 0; j < n; ++j) {
        KahanSum s;
        for (std::size_t i = 0; i < n; ++i)
            s.add(axis_quadrature_weight(i, n) * g.r(i) * A[i * n + j]);
        const double col = s.value() * g.dr;
        const double scale = axis_quadrature_weight(j, n) * g.r(j) * root / col;
        for (std::size_t i = 0; i < n; ++i) A[i * n + j] *= scale;
    }
}

// z-direction derivative kernel: the odd factor -(z - z~)/2t times the
// normalized Gaussian (its exact integral is zero, and the sampled version
// keeps that by symmetry away from the ends).
std::vector<double> build_B_deriv(const Grid& g, double t, const std::vector<double>& Gz) {
    const std::size_t n = g.n_z;
    std::vector<double> B(n * n, 0.0);
    const double inv2t = 0.5 / t;
    for (std::size_t k = 0; k < n; ++k) {
        const double zk = g.z(k);
        for (std::size_t l = 0; l < n; ++l) {
            const double e = Gz[k * n + l];
            if (e == 0.0) continue;
            B[k * n + l] = -(zk - g.z(l)) * inv2t * e;
        }
    }
    return B;
}

// Adds (dr dz / 4 pi t) sum_{j,l} A[i][j] B[k][l] f[j][l] into out[i][k],
// computed as two dense contractions. Loop order and chunking are fixed, so
// the result is reproducible across thread counts.
void sep_apply_into(double t, const Grid& g, const std::vector<double>& A,
                    const std::vector<double>& B, const std::vector<double>& f,
                    std::vector<double>& out) {
    const std::size_t nr = g.n_r;
    const std::size_t nz = g.n_z;

    std::vector<double> T1(nr * nz);
    parallel_chunks(nr, [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            const double* frow = &f[j * nz];
            for (std::size_t k = 0; k < nz; ++k) {
                const double* brow = &B[k * nz];
                double s = 0.0;
                for (std::size_t l = 0; l < nz; ++l) s += frow[l] * brow[l];
                T1[j * nz + k] = s;
            }
        }
    });

    const double pref = g.dr * g.dz / (4.0 * pi * t);
    parallel_chunks(nr, [&](std::size_t i0, std::size_t i1) {
        std::vector<double> row(nz);
        for (std::size_t i = i0; i < i1; ++i) {
            row.assign(nz, 0.0);
            for (std::size_t j = 0; j < nr; ++j) {
                const double a = A[i * nr + j];
                if (a == 0.0) continue;
                const double* t1 = &T1[j * nz];
                for (std::size_t k = 0; k < nz; ++k) row[k] += a * t1[k];
            }
            double* orow = &out[i * nz];
            for (std::size_t k = 0; k < nz; ++k) orow[k] += pref * row[k];
        }
    });
}

void check_vector(const VectorField& f, const char* op) {
    if (f.grid.size() == 0 || f.vr.size() != f.grid.size() || f.vz.size() != f.grid.size())
        throw domain_error(std::string(op) + ": malformed vector field");
}

bool any_nonzero(const std::vector<double>& v) {
    for (double x : v)
        if (x != 0.0) return true;
    return false;
}

}  // namespace

double semigroup_dt_min(const Grid& g) {
    const double h = std::min(g.dr, g.dz);
    return (h / 8.0) * (h / 8.0);
}

ScalarField apply_S1(double t, const ScalarField& f) {
    check_time(t, "apply_S1");
    if (f.tag != Measure::PLANAR) throw domain_error("apply_S1: field must be PLANAR");
    const double floor_t = semigroup_dt_min(f.grid);
    if (t < floor_t) {
        warn_small_t("apply_S1", t, floor_t, "returning the input unchanged");
        return f;
    }
    warm_special_tables();
    const Grid& g = f.grid;
    const auto A = build_A(g, t, RadialKind::S1, gauss_norm(radial_nodes(g), g.dr, t, true));
    const auto B = gauss_norm(z_nodes(g), g.dz, t, false);
    ScalarField out(g, f.tag);
    sep_apply_into(t, g, A, B, f.values, out.values);
    return out;
}

ScalarField apply_S2_axi(double t, const ScalarField& f) {
    check_time(t, "apply_S2_axi");
    if (f.tag != Measure::AXISYM) throw domain_error("apply_S2_axi: field must be AXISYM");
    const double floor_t = semigroup_dt_min(f.grid);
    if (t < floor_t) {
        warn_small_t("apply_S2_axi", t, floor_t, "returning the input unchanged");
        return f;
    }
    warm_special_tables();
    const Grid& g = f.grid;
    auto A = build_A(g, t, RadialKind::S2, gauss_norm(radial_nodes(g), g.dr, t, true));
    normalize_S2_columns(A, g, t);
    const auto B = gauss_norm(z_nodes(g), g.dz, t, false);
    ScalarField out(g, f.tag);
    sep_apply_into(t, g, A, B, f.values, out.values);
    return out;
}

ScalarField apply_S1_div_star(double t, const VectorField& f) {
    check_time(t, "apply_S1_div_star");
    check_vector(f, "apply_S1_div_star");
    const Grid& g = f.grid;
    const double floor_t = semigroup_dt_min(g);
    if (t < floor_t) {
        warn_small_t("apply_S1_div_star", t, floor_t, "evaluating at the floor instead");
        t = floor_t;
    }
    ScalarField out(g, Measure::PLANAR);
    const bool has_r = any_nonzero(f.vr);
    const bool has_z = any_nonzero(f.vz);
    if (!has_r && !has_z) return out;
    warm_special_tables();

    const auto Gr = gauss_norm(radial_nodes(g), g.dr, t, true);
    const auto Gz = gauss_norm(z_nodes(g), g.dz, t, false);

    if (has_r)
        sep_apply_into(t, g, build_A(g, t, RadialKind::S1_DIV, Gr), Gz, f.vr, out.values);
    if (has_z)
        sep_apply_into(t, g, build_A(g, t, RadialKind::S1, Gr), build_B_deriv(g, t, Gz), f.vz,
                       out.values);
    return out;
}

ScalarField apply_S2_div(double t, const VectorField& f) {
    check_time(t, "apply_S2_div");
    check_vector(f, "apply_S2_div");
    const Grid& g = f.grid;
    const double floor_t = semigroup_dt_min(g);
    if (t < floor_t) {
        warn_small_t("apply_S2_div", t, floor_t, "evaluating at the floor instead");
        t = floor_t;
    }
    ScalarField out(g, Measure::AXISYM);
    const bool has_r = any_nonzero(f.vr);
    const bool has_z = any_nonzero(f.vz);
    if (!has_r && !has_z) return out;
    warm_special_tables();

    const auto Gr = gauss_norm(radial_nodes(g), g.dr, t, true);
    const auto Gz = gauss_norm(z_nodes(g), g.dz, t, false);

    if (has_r) {
        sep_apply_into(t, g, build_A(g, t, RadialKind::S2_DIV, Gr), Gz, f.vr, out.values);
        sep_apply_into(t, g, build_A(g, t, RadialKind::S2_DIV_AXIS, Gr), Gz, f.vr, out.values);
    }
    if (has_z)
        sep_apply_into(t, g, build_A(g, t, RadialKind::S2, Gr), build_B_deriv(g, t, Gz), f.vz,
                       out.values);
    return out;
}

double weighted_semigroup_probe(double t, const ScalarField& f, double alpha, double beta,
                                double p, double q) {
    check_time(t, "weighted_semigroup_probe");
    if (!(alpha <= beta))
        throw domain_error("weighted_semigroup_probe: requires alpha <= beta");
    if (!(p >= 1.0) || !(q >= p))
        throw domain_error("weighted_semigroup_probe: requires 1 <= p <= q");

    const double den = weighted_lp_norm(f, beta, p);
    if (!(den > 0.0) || !std::isfinite(den))
        throw domain_error("weighted_semigroup_probe: input norm is zero or not finite");

    const ScalarField sf = apply_S1(t, f);
    const double num = weighted_lp_norm(sf, alpha, q);
    const double expo = 1.0 / p - 1.0 / q + 0.5 * (beta - alpha);
    return std::pow(t, expo) * num / den;
}

}  // namespace axib
