#include "axib/biot_savart.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "axib/errors.hpp"
#include "axib/norms.hpp"
#include "axib/special.hpp"
#include "axib/threading.hpp"

namespace axib {

namespace {

constexpr double pi = 3.14159265358979323846;

struct KernelPair {
    double kr;
    double kz;
};

KernelPair kernel_pair(double r, double z, double rt, double zt) {
    const double dr = r - rt;
    const double dz = z - zt;
    const double xi2 = (dr * dr + dz * dz) / (rt * r);
    const double fp = fast_F_prime(xi2);
    const double f = fast_F(xi2);
    const double inv = 1.0 / (std::pow(r, 1.5) * std::sqrt(rt));
    KernelPair k;
    k.kr = -(1.0 / pi) * dz * inv * fp;
    k.kz = (1.0 / pi) * dr * inv * fp +
           (1.0 / (4.0 * pi)) * (inv * rt) * (f - 2.0 * xi2 * fp);
    return k;
}

double resolve_near_radius(const Grid& g, const BSConfig& cfg) {
    if (cfg.subcell_refine < 2)
        throw config_error("biot_savart: subcell_refine must be at least 2");
    if (cfg.near_radius < 0.0) throw config_error("biot_savart: near_radius must be positive");
    return cfg.near_radius > 0.0 ? cfg.near_radius : 2.0 * std::max(g.dr, g.dz);
}

// Offsets (dj, dl) of source cells whose centers lie within the refinement
// radius of a target node.
std::vector<std::pair<int, int>> near_offsets(const Grid& g, double radius) {
    std::vector<std::pair<int, int>> out;
    const int jr = static_cast<int>(radius / g.dr) + 1;
    const int lr = static_cast<int>(radius / g.dz) + 1;
    for (int dj = -jr; dj <= jr; ++dj)
        for (int dl = -lr; dl <= lr; ++dl) {
            const double d2 = dj * g.dr * dj * g.dr + dl * g.dz * dl * g.dz;
            if (d2 <= radius * radius) out.emplace_back(dj, dl);
        }
    return out;
}

// Average of the kernel over an m x m subdivision of the source cell
// centered at (rt, zt); m is forced even when the target sits inside the
// cell so no quadrature point coincides with it.
KernelPair refined_cell(double r, double z, double rt, double zt, const Grid& g, int m,
                        bool self) {
    if (self && (m % 2)) ++m;
    KernelPair acc{0.0, 0.0};
    for (int a = 0; a < m; ++a) {
        const double rs = rt + ((a + 0.5) / m - 0.5) * g.dr;
        for (int b = 0; b < m; ++b) {
            const double zs = zt + ((b + 0.5) / m - 0.5) * g.dz;
            const KernelPair k = kernel_pair(r, z, rs, zs);
            acc.kr += k.kr;
            acc.kz += k.kz;
        }
    }
    acc.kr /= m * m;
    acc.kz /= m * m;
    return acc;
}

}  // namespace

double kernel_K(double r, double z, double rt, double zt, KernelComponent which) {
    if (!(r > 0.0) || !(rt > 0.0))
        throw domain_error("kernel_K: radial coordinates must be positive");
    if (r == rt && z == zt) throw domain_error("kernel_K: coincident points");
    const KernelPair k = kernel_pair(r, z, rt, zt);
    return which == KernelComponent::R ? k.kr : k.kz;
}

VelocityField velocity_from_vorticity(const ScalarField& omega, const BSConfig& cfg) {
    if (omega.tag != Measure::PLANAR)
        throw domain_error("velocity_from_vorticity: omega must carry the PLANAR tag");
    const Grid& g = omega.grid;
    const double radius = resolve_near_radius(g, cfg);
    const auto near = near_offsets(g, radius);
    const double cell = g.dr * g.dz;
    const std::size_t nz = g.n_z;
    const std::size_t noff = 2 * nz - 1;

    VelocityField v(g);
    warm_special_tables();

    parallel_chunks(g.n_r, [&](std::size_t i_lo, std::size_t i_hi) {
        std::vector<double> kr_tab(g.n_r * noff), kz_tab(g.n_r * noff);
        for (std::size_t i = i_lo; i < i_hi; ++i) {
            const double r = g.r(i);
            // Kernel depends on z only through z - z~, so one table row per
            // source radius serves every target height in this target row.
            for (std::size_t j = 0; j < g.n_r; ++j) {
                const double rt = g.r(j);
                for (std::size_t d = 0; d < noff; ++d) {
                    const double dz = (static_cast<double>(d) - static_cast<double>(nz - 1)) * g.dz;
                    if (j == i && dz == 0.0) {
                        kr_tab[j * noff + d] = 0.0;
                        kz_tab[j * noff + d] = 0.0;
                        continue;
                    }
                    const KernelPair k = kernel_pair(r, 0.0, rt, -dz);
                    kr_tab[j * noff + d] = k.kr;
                    kz_tab[j * noff + d] = k.kz;
                }
            }
            for (std::size_t k = 0; k < nz; ++k) {
                double sr = 0.0, sz = 0.0;
                for (std::size_t j = 0; j < g.n_r; ++j) {
                    const double* krow = &kr_tab[j * noff + (k + nz - 1)];
                    const double* zrow = &kz_tab[j * noff + (k + nz - 1)];
                    const double* w = &omega.values[j * nz];
                    for (std::size_t l = 0; l < nz; ++l) {
                        sr += krow[-static_cast<std::ptrdiff_t>(l)] * w[l];
                        sz += zrow[-static_cast<std::ptrdiff_t>(l)] * w[l];
                    }
                }
                // Swap the midpoint kernel for the subcell average on cells
                // near the singularity.
                const double z = g.z(k);
                for (const auto& [dj, dl] : near) {
                    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + dj;
                    const std::ptrdiff_t l = static_cast<std::ptrdiff_t>(k) + dl;
                    if (j < 0 || j >= static_cast<std::ptrdiff_t>(g.n_r)) continue;
                    if (l < 0 || l >= static_cast<std::ptrdiff_t>(nz)) continue;
                    const double w = omega.at(j, l);
                    const std::size_t d = static_cast<std::size_t>(
                        static_cast<std::ptrdiff_t>(k + nz - 1) - l);
                    sr -= kr_tab[j * noff + d] * w;
                    sz -= kz_tab[j * noff + d] * w;
                    const KernelPair fine =
                        refined_cell(r, z, g.r(j), g.z(l), g, cfg.subcell_refine, dj == 0 && dl == 0);
                    sr += fine.kr * w;
                    sz += fine.kz * w;
                }
                v.vr_at(i, k) = sr * cell;
                v.vz_at(i, k) = sz * cell;
            }
        }
    });
    return v;
}

ScalarField stream_function(const ScalarField& omega, const BSConfig& cfg) {
    if (omega.tag != Measure::PLANAR)
        throw domain_error("stream_function: omega must carry the PLANAR tag");
    const Grid& g = omega.grid;
    const double radius = resolve_near_radius(g, cfg);
    const auto near = near_offsets(g, radius);
    const double cell = g.dr * g.dz;
    const std::size_t nz = g.n_z;
    const std::size_t noff = 2 * nz - 1;

    ScalarField psi(g, Measure::PLANAR);
    warm_special_tables();

    auto kern = [](double r, double rt, double dz) {
        const double dr = r - rt;
        const double xi2 = (dr * dr + dz * dz) / (rt * r);
        return std::sqrt(rt * r) / (2.0 * pi) * fast_F(xi2);
    };

    parallel_chunks(g.n_r, [&](std::size_t i_lo, std::size_t i_hi) {
        std::vector<double> tab(g.n_r * noff);
        for (std::size_t i = i_lo; i < i_hi; ++i) {
            const double r = g.r(i);
            for (std::size_t j = 0; j < g.n_r; ++j) {
                const double rt = g.r(j);
                for (std::size_t d = 0; d < noff; ++d) {
                    const double dz = (static_cast<double>(d) - static_cast<double>(nz - 1)) * g.dz;
                    tab[j * noff + d] = (j == i && dz == 0.0) ? 0.0 : kern(r, rt, dz);
                }
            }
            for (std::size_t k = 0; k < nz; ++k) {
                double s = 0.0;
                for (std::size_t j = 0; j < g.n_r; ++j) {
                    const double* row = &tab[j * noff + (k + nz - 1)];
                    const double* w = &omega.values[j * nz];
                    for (std::size_t l = 0; l < nz; ++l)
                        s += row[-static_cast<std::ptrdiff_t>(l)] * w[l];
                }
                for (const auto& [dj, dl] : near) {
                    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + dj;
                    const std::ptrdiff_t l = static_cast<std::ptrdiff_t>(k) + dl;
                    if (j < 0 || j >= static_cast<std::ptrdiff_t>(g.n_r)) continue;
                    if (l < 0 || l >= static_cast<std::ptrdiff_t>(nz)) continue;
                    const double w = omega.at(j, l);
                    const std::size_t d = static_cast<std::size_t>(
                        static_cast<std::ptrdiff_t>(k + nz - 1) - l);
                    s -= tab[j * noff + d] * w;
                    int m = cfg.subcell_refine;
                    const bool self = (dj == 0 && dl == 0);
                    if (self && (m % 2)) ++m;
                    double acc = 0.0;
                    for (int a = 0; a < m; ++a) {
                        const double rs = g.r(j) + ((a + 0.5) / m - 0.5) * g.dr;
                        for (int b = 0; b < m; ++b) {
                            const double zs = g.z(l) + ((b + 0.5) / m - 0.5) * g.dz;
                            acc += kern(r, rs, g.z(k) - zs);
                        }
                    }
                    s += acc / (m * m) * w;
                }
                psi.at(i, k) = s * cell;
            }
        }
    });
    return psi;
}

VelocityField velocity_from_stream(const ScalarField& psi) {
    const Grid& g = psi.grid;
    VelocityField v(g);
    auto ddr = [&](std::size_t i, std::size_t k) {
        if (i == 0) return (psi.at(1, k) - psi.at(0, k)) / g.dr;
        if (i == g.n_r - 1) return (psi.at(i, k) - psi.at(i - 1, k)) / g.dr;
        return (psi.at(i + 1, k) - psi.at(i - 1, k)) / (2.0 * g.dr);
    };
    auto ddz = [&](std::size_t i, std::size_t k) {
        if (k == 0) return (psi.at(i, 1) - psi.at(i, 0)) / g.dz;
        if (k == g.n_z - 1) return (psi.at(i, k) - psi.at(i, k - 1)) / g.dz;
        return (psi.at(i, k + 1) - psi.at(i, k - 1)) / (2.0 * g.dz);
    };
    for (std::size_t i = 0; i < g.n_r; ++i)
        for (std::size_t k = 0; k < g.n_z; ++k) {
            v.vr_at(i, k) = -ddz(i, k) / g.r(i);
            v.vz_at(i, k) = ddr(i, k) / g.r(i);
        }
    return v;
}

std::map<std::string, double> measure_velocity_estimates(const ScalarField& omega,
                                                         const BSConfig& cfg) {
    const double w43 = lp_norm(omega, 4.0 / 3.0);
    if (w43 == 0.0) throw domain_error("measure_velocity_estimates: omega vanishes");
    const double w4 = lp_norm(omega, 4.0);

    const VelocityField v = velocity_from_vorticity(omega, cfg);
    const Grid& g = omega.grid;
    ScalarField speed(g, Measure::PLANAR);
    for (std::size_t n = 0; n < g.size(); ++n)
        speed.values[n] = std::hypot(v.vr[n], v.vz[n]);

    const double v4 = lp_norm(speed, 4.0);
    const double vsup = lp_norm(speed, p_inf);
    const double rv4 = weighted_lp_norm(speed, 1.0, 4.0);
    const double rw43 = weighted_lp_norm(omega, 1.0, 4.0 / 3.0);

    std::map<std::string, double> out;
    out["v_L4_over_w_L43"] = v4 / w43;
    out["v_sup_interp"] = vsup / (std::sqrt(w43) * std::sqrt(w4));
    out["rv_L4_over_rw_L43"] = rv4 / rw43;
    return out;
}

double vr_over_r_sup(const VelocityField& v) {
    const Grid& g = v.grid;
    double sup = 0.0;
    for (std::size_t i = 0; i < g.n_r; ++i) {
        const double inv_r = 1.0 / g.r(i);
        for (std::size_t k = 0; k < g.n_z; ++k)
            sup = std::max(sup, std::abs(v.vr_at(i, k)) * inv_r);
    }
    return sup;
}

}  // namespace axib
