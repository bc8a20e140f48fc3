#include "jang/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "jang/errors.hpp"
#include "jang/numerics.hpp"

namespace jang {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

GeometryProfile build_geometry(const InitialData& data, const JangSolution& sol) {
    GeometryProfile g;
    g.grid = sol.grid;
    const std::size_t n = sol.grid.size();
    g.s = sol.s;
    g.rho_s = sol.phi;
    g.rho.resize(n);
    g.area.resize(n);
    g.Hbar.resize(n);
    g.m.resize(n);
    g.Rbar.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.rho[i] = data.rho(sol.grid[i]);
        g.area[i] = 4.0 * kPi * g.rho[i] * g.rho[i];
        g.Hbar[i] = 2.0 * g.rho_s[i] / g.rho[i];
        g.m[i] = hawking_mass(g.rho[i], g.rho_s[i]);
    }

    // rho_ss: difference rho_s on the grid, divide by ds/dr = sqrt(gbar11).
    auto dphi_dr = num::deriv_indexed(sol.grid.nodes(), g.rho_s);
    g.rho_ss.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sol.v[i];
        const double one_m_v2 = (1.0 - v) * (1.0 + v);
        const double ds_dr = std::sqrt(data.g11(sol.grid[i]) / std::max(one_m_v2, 1e-300));
        g.rho_ss[i] = std::isfinite(ds_dr) && ds_dr > 0.0 ? dphi_dr[i] / ds_dr : 0.0;
    }
    // Horizon node: ds/dr diverges; one-sided difference in s instead.
    if (g.s.size() > 1 && g.s[1] > g.s[0])
        g.rho_ss[0] = (g.rho_s[1] - g.rho_s[0]) / (g.s[1] - g.s[0]);

    for (std::size_t i = 0; i < n; ++i) g.Rbar[i] = rbar_direct(g.rho[i], g.rho_s[i], g.rho_ss[i]);

    g.adm = adm_mass(g);
    return g;
}

std::vector<double> rho_ss_sgrid(const GeometryProfile& g) {
    return num::deriv_indexed(g.s, g.rho_s);
}

MassCheckNorms mass_derivative_check(const GeometryProfile& g, std::size_t boundary_layer) {
    const std::size_t n = g.grid.size();
    MassCheckNorms out;
    if (n < boundary_layer + 4) return out;
    auto dm_ds = num::deriv_indexed(g.s, g.m);
    std::vector<double> rs, vals;
    out.window_begin = boundary_layer;
    out.window_end = n - 1;
    for (std::size_t i = out.window_begin; i < out.window_end; ++i) {
        const double res = 2.0 * dm_ds[i] - 0.5 * g.rho_s[i] * g.rho[i] * g.rho[i] * g.Rbar[i];
        rs.push_back(g.grid[i]);
        vals.push_back(res);
    }
    out.sup = num::sup_norm(vals);
    out.l2 = num::l2_norm(rs, vals);
    return out;
}

AdmEstimate adm_mass(const GeometryProfile& g) {
    const double rmax = g.grid.r_max();
    std::vector<double> rt, mt;
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
        if (g.grid[i] < 0.1 * rmax) continue;
        rt.push_back(g.grid[i]);
        mt.push_back(g.m[i]);
    }
    if (rt.size() < 8) throw DomainError("adm_mass: insufficient tail for extrapolation");
    double a0[3];
    for (int order = 1; order <= 3; ++order) {
        auto coef = num::fit_inverse_powers(rt, mt, order);
        a0[order - 1] = coef[0];
    }
    AdmEstimate out;
    out.value = a0[1];  // quadratic-order extrapolant
    out.uncertainty = std::max(std::abs(a0[1] - a0[0]), std::abs(a0[2] - a0[1]));
    out.uncertainty = std::max(out.uncertainty, 1e-15 * std::abs(out.value));
    // relative to the larger of the value and a mass-scale floor, so a limit
    // near zero (horizonless data, decaying m) is not misread as
    // non-convergence when the spread is physically negligible
    const double scale = std::max({std::abs(out.value), 1e-6 * 0.5 * g.rho[0], 1e-12});
    if (out.uncertainty > 0.01 * scale)
        throw DomainError("adm_mass: non-convergent tail (extrapolation spread above 1%)");
    return out;
}

}  // namespace jang
