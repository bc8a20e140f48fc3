#include "jang/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "jang/errors.hpp"
#include "jang/numerics.hpp"

namespace jang {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double deficit_angular(const InitialData& data, const JangSolution& sol, std::size_t i) {
    const double r = sol.grid[i];
    return data.sqrt_g11_inv(r) * sol.v[i] * data.rho_r(r) / data.rho(r) - data.kb(r);
}

DeficitEigenvalues deficit_components(const InitialData& data, const JangSolution& sol,
                                      std::size_t i) {
    DeficitEigenvalues out;
    out.angular = deficit_angular(data, sol, i);
    out.radial = -2.0 * out.angular;
    out.norm2 = 6.0 * out.angular * out.angular;
    return out;
}

double q_component(const InitialData& data, const JangSolution& sol, std::size_t i) {
    const double v = sol.v[i];
    const double one_m_v2 = (1.0 - v) * (1.0 + v);
    if (one_m_v2 <= 0.0) throw DomainError("q_component: v = +-1 at interior point");
    const double r = sol.grid[i];
    return -2.0 * std::sqrt(data.g11(r)) * v / one_m_v2 * deficit_angular(data, sol, i);
}

double q_component_definitional(const InitialData& data, const JangSolution& sol, std::size_t i) {
    const double v = sol.v[i];
    const double one_m_v2 = (1.0 - v) * (1.0 + v);
    if (one_m_v2 <= 0.0) throw DomainError("q_component: v = +-1 at interior point");
    const double r = sol.grid[i];
    const double gbar11 = data.g11(r) / one_m_v2;
    const double w1 = data.sqrt_g11_inv(r) * v;
    return gbar11 * w1 * deficit_components(data, sol, i).radial;
}

double q_norm2(const InitialData& data, const JangSolution& sol, std::size_t i) {
    const double v = sol.v[i];
    const double one_m_v2 = (1.0 - v) * (1.0 + v);
    const double q1 = q_component(data, sol, i);
    return one_m_v2 / data.g11(sol.grid[i]) * q1 * q1;
}

CurrentPairing current_pairing(const InitialData& data, const JangSolution& sol, std::size_t i) {
    CurrentPairing out;
    const double r = sol.grid[i];
    out.Jw = energy_momentum(data, r).J1 * data.sqrt_g11_inv(r) * sol.v[i];
    out.w_norm = std::abs(sol.v[i]);
    return out;
}

double boundary_integrand(const InitialData& data, const JangSolution& sol, std::size_t i) {
    const double r = sol.grid[i];
    const double v = sol.v[i];
    const double rho_r = data.rho_r(r), rho = data.rho(r);
    const double lam = data.sqrt_g11_inv(r) * v * rho_r / rho - data.kb(r);
    return 2.0 * rho_r * v / std::sqrt(data.g11(r)) * lam * rho * rho;
}

IdentityResidual curvature_identity_residual(const InitialData& data, const JangSolution& sol,
                                 DerivativeSource src, std::size_t boundary_layer) {
    const std::size_t n = sol.grid.size();
    IdentityResidual out;
    out.profile.assign(n, 0.0);
    if (n < boundary_layer + 6) return out;
    auto r = sol.grid.nodes();

    // Node values of the data fields.
    std::vector<double> g11v(n), rhov(n), kav(n), kbv(n);
    for (std::size_t i = 0; i < n; ++i) {
        g11v[i] = data.g11(r[i]);
        rhov[i] = data.rho(r[i]);
        kav[i] = data.ka(r[i]);
        kbv[i] = data.kb(r[i]);
    }

    // Field derivatives per the requested source. The grid route differences
    // hinv = 1/g11 rather than g11: in the static area-radius gauge g11
    // diverges at the horizon while hinv stays linear, and the curvature
    // assembles from bounded combinations (g11_r/g11^2 = -hinv_r).
    std::vector<double> hinv(n), hinv_r(n), rhor(n), rhorr(n), kbr(n);
    for (std::size_t i = 0; i < n; ++i) hinv[i] = 1.0 / g11v[i];
    if (src == DerivativeSource::GridFd) {
        hinv_r = num::deriv_indexed(r, hinv);
        rhor = num::deriv_indexed(r, rhov);
        rhorr = num::second_deriv_indexed(r, rhov);
        kbr = num::deriv_indexed(r, kbv);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            hinv_r[i] = -data.g11_r(r[i]) / (g11v[i] * g11v[i]);
            rhor[i] = data.rho_r(r[i]);
            rhorr[i] = data.rho_rr(r[i]);
            kbr[i] = data.kb_r(r[i]);
        }
    }

    // rho_ss and the divergence-flux profile Phi = rho^2 phi q1 / sqrt(gbar11).
    std::vector<double> rho_ss(n), Phi(n), mu(n), Jw(n), D(n), Q2(n), q1v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sol.v[i];
        const double one_m_v2 = (1.0 - v) * (1.0 + v);
        const double sg = std::sqrt(hinv[i]);
        const double lam = sg * v * rhor[i] / rhov[i] - kbv[i];
        D[i] = 6.0 * lam * lam;
        const double q1 = one_m_v2 > 0.0 ? -2.0 / sg * v / one_m_v2 * lam : 0.0;
        q1v[i] = q1;
        Q2[i] = one_m_v2 * hinv[i] * q1 * q1;
        Phi[i] = rhov[i] * rhov[i] * sol.phi[i] * q1 * std::sqrt(one_m_v2) * sg;
        const double R = 2.0 / (rhov[i] * rhov[i]) * (1.0 - rhor[i] * rhor[i] * hinv[i]) -
                         4.0 * rhorr[i] * hinv[i] / rhov[i] -
                         2.0 * hinv_r[i] * rhor[i] / rhov[i];
        const double tr = kav[i] + 2.0 * kbv[i];
        mu[i] = (R - (kav[i] * kav[i] + 2.0 * kbv[i] * kbv[i]) + tr * tr) / (16.0 * kPi);
        const double J1 = ((rhor[i] / rhov[i]) * (kav[i] - kbv[i]) - kbr[i]) / (4.0 * kPi);
        Jw[i] = J1 * sg * v;
    }
    if (src == DerivativeSource::GridFd) {
        auto dphi = num::deriv_indexed(r, sol.phi);
        auto dsdr = num::deriv_indexed(r, sol.s);
        for (std::size_t i = 0; i < n; ++i)
            rho_ss[i] = dsdr[i] > 0.0 ? dphi[i] / dsdr[i] : 0.0;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = sol.v[i];
            const double one_m_v2 = (1.0 - v) * (1.0 + v);
            if (one_m_v2 <= 0.0) continue;
            const double sq = std::sqrt(one_m_v2);
            const double sqh = std::sqrt(hinv[i]);  // 1/sqrt(g11)
            const double phi_r = (-v * sol.v_r[i] / sq * rhor[i] + sq * rhorr[i]) * sqh +
                                 sq * rhor[i] * hinv_r[i] / (2.0 * sqh);
            rho_ss[i] = phi_r * sq * sqh;
        }
    }

    auto dPhi = num::deriv_indexed(r, Phi);
    out.window_begin = boundary_layer;
    out.window_end = n - 1;
    std::vector<double> rs, vals;
    for (std::size_t i = out.window_begin; i < out.window_end; ++i) {
        if (!(sol.phi[i] > 1e-14))
            throw DomainError("curvature_identity_residual: phi below 1e-14 inside the window");
        const double v = sol.v[i];
        const double one_m_v2 = (1.0 - v) * (1.0 + v);
        const double sqrt_gbar11 = std::sqrt(1.0 / (hinv[i] * one_m_v2));
        const double div = dPhi[i] / (rhov[i] * rhov[i] * sqrt_gbar11);
        const double Rbar = rbar_direct(rhov[i], sol.phi[i], rho_ss[i]);
        const double rhs = 16.0 * kPi * (mu[i] - Jw[i]) + D[i] + 2.0 * Q2[i] -
                           2.0 * div / sol.phi[i];
        out.profile[i] = Rbar - rhs;
        rs.push_back(r[i]);
        vals.push_back(out.profile[i]);
    }
    out.sup = num::sup_norm(vals);
    out.l2 = num::l2_norm(rs, vals);
    return out;
}

PenroseReport penrose_report(const InitialData& data, const JangSolution& sol,
                             const GeometryProfile& geom, bool dec_passed) {
    PenroseReport rep;
    rep.dec_passed = dec_passed;
    rep.m_adm = geom.adm.value;
    rep.m_adm_uncertainty = geom.adm.uncertainty;
    rep.area = geom.area[0];
    rep.margin = rep.m_adm - std::sqrt(rep.area / (16.0 * kPi));
    rep.mass_profile_margin = rep.m_adm - geom.m[0];

    const std::size_t n = sol.grid.size();
    // Bulk integrands against ds (trapezoid over the profile). The inner node
    // contributes only for regular starts: at a horizon start phi(0) = 0 and
    // |v| = 1 makes the q factor a removable 0/0, so it starts from zero.
    std::vector<double> f_energy(n, 0.0), f_deficit(n, 0.0), f_q(n, 0.0);
    const std::size_t i0 = std::abs(sol.v[0]) < 1.0 && std::isfinite(energy_momentum(
                                                           data, sol.grid[0]).mu)
                               ? 0
                               : 1;
    for (std::size_t i = i0; i < n; ++i) {
        const double w = sol.phi[i] * geom.rho[i] * geom.rho[i];
        const double muJw = energy_momentum(data, sol.grid[i]).mu -
                            current_pairing(data, sol, i).Jw;
        f_energy[i] = 4.0 * kPi * w * muJw;
        f_deficit[i] = 0.25 * w * deficit_components(data, sol, i).norm2;
        f_q[i] = 0.5 * w * q_norm2(data, sol, i);  // 1/4 of the 2|q|^2 term
        if (!std::isfinite(f_energy[i])) f_energy[i] = 0.0;
    }
    auto ie = num::cumulative_trapezoid(geom.s, f_energy);
    auto id = num::cumulative_trapezoid(geom.s, f_deficit);
    auto iq = num::cumulative_trapezoid(geom.s, f_q);
    rep.decomposition.energy = ie.back();
    rep.decomposition.deficit = id.back();
    rep.decomposition.q_term = iq.back();
    rep.boundary_inner = boundary_integrand(data, sol, 0);
    if (!std::isfinite(rep.boundary_inner)) rep.boundary_inner = 0.0;
    rep.boundary_outer = boundary_integrand(data, sol, n - 1);
    rep.decomposition.divergence = 0.5 * (rep.boundary_outer - rep.boundary_inner);

    const double scale = data.mass_scale();
    rep.decomposition_tolerance =
        std::max({3.0 * rep.m_adm_uncertainty, 1e-6 * scale, 5e-3 * std::abs(rep.margin)});
    rep.decomposition_consistent =
        std::abs(rep.decomposition.total() - rep.mass_profile_margin) <=
        rep.decomposition_tolerance;

    rep.pass = rep.decomposition_consistent && rep.dec_passed &&
               rep.margin >= -std::max(rep.m_adm_uncertainty, 1e-12);
    rep.verdict = rep.pass ? "PASS" : "FAIL";
    return rep;
}

RigidityReport rigidity_check(const InitialData& data, const JangSolution& sol,
                              const GeometryProfile& geom, const PenroseReport& rep,
                              double tolerance, std::size_t boundary_layer) {
    RigidityReport out;
    out.tolerance = tolerance;
    const double scale = data.mass_scale();
    const double margin_tol = std::max(10.0 * rep.m_adm_uncertainty, 1e-3 * scale);
    if (std::abs(rep.margin) > margin_tol) {
        out.applicable = false;
        out.note = "margin exceeds equality tolerance: strict-inequality data";
        return out;
    }
    out.applicable = true;
    const std::size_t n = sol.grid.size();
    const double M = rep.m_adm;
    double e = 0.0, d = 0.0, q = 0.0, p = 0.0, gb = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double muJw = energy_momentum(data, sol.grid[i]).mu -
                            current_pairing(data, sol, i).Jw;
        if (std::isfinite(muJw)) e = std::max(e, std::abs(muJw));
        d = std::max(d, std::sqrt(deficit_components(data, sol, i).norm2));
        if (i >= boundary_layer) q = std::max(q, std::sqrt(q_norm2(data, sol, i)));
        const double sc = 1.0 - 2.0 * M / geom.rho[i];
        p = std::max(p, std::abs(sol.phi[i] - std::sqrt(std::max(sc, 0.0))));
        const double v = sol.v[i];
        const double gbar11_inv = (1.0 - v) * (1.0 + v) / data.g11(sol.grid[i]);
        gb = std::max(gb, std::abs(gbar11_inv - sc));
    }
    out.res_energy = e;
    out.res_deficit = d;
    out.res_q = q;
    out.res_phi = p;
    out.res_gbar = gb;
    out.pass = e <= tolerance && d <= tolerance && q <= tolerance && p <= tolerance &&
               gb <= tolerance;
    return out;
}

VerificationReport run_verification(const InitialData& data, const BoundaryCondition& bc,
                                    const SolverConfig& config, int levels) {
    VerificationReport rep;
    if (levels < 3) levels = 3;

    struct Level {
        double th1_sup = 0.0, th1_l2 = 0.0;
        double mass_sup = 0.0, mass_l2 = 0.0;
        double cross_sup = 0.0, cross_l2 = 0.0;
    };
    auto run_level = [&](int lvl) {
        SolverConfig c = config;
        c.nodes = config.nodes << lvl;
        auto sol = solve(data, bc, c);
        auto geom = build_geometry(data, sol);
        Level out;
        auto th = curvature_identity_residual(data, sol, DerivativeSource::GridFd);
        out.th1_sup = th.sup;
        out.th1_l2 = th.l2;
        auto mc = mass_derivative_check(geom);
        out.mass_sup = mc.sup;
        out.mass_l2 = mc.l2;
        out.cross_sup = sol.diag.cross_residual_sup;
        out.cross_l2 = sol.diag.cross_residual_l2;
        return out;
    };

    std::vector<std::future<Level>> futs;
    for (int l = 0; l < levels; ++l)
        futs.push_back(std::async(std::launch::async, run_level, l));
    std::vector<Level> lv;
    for (auto& f : futs) lv.push_back(f.get());

    {
        CheckResult c;
        c.name = "scalar-curvature-identity";
        c.norm_sup = lv.back().th1_sup;
        c.norm_l2 = lv.back().th1_l2;
        c.order = num::convergence_order(lv[0].th1_sup, lv[1].th1_sup, lv[2].th1_sup);
        c.pass = c.order >= 1.9;
        c.detail = "sup residual per level: " + std::to_string(lv[0].th1_sup) + ", " +
                   std::to_string(lv[1].th1_sup) + ", " + std::to_string(lv[2].th1_sup);
        rep.checks.push_back(c);
    }
    {
        CheckResult c;
        c.name = "mass-derivative-identity";
        c.norm_sup = lv.back().mass_sup;
        c.norm_l2 = lv.back().mass_l2;
        c.order = num::convergence_order(lv[0].mass_sup, lv[1].mass_sup, lv[2].mass_sup);
        c.pass = c.order >= 1.9;
        rep.checks.push_back(c);
    }
    {
        CheckResult c;
        c.name = "cross-form-residual";
        c.norm_sup = lv.back().cross_sup;
        c.norm_l2 = lv.back().cross_l2;
        c.pass = c.norm_sup <= config.residual_gate;
        rep.checks.push_back(c);
    }
    {
        // Branch equivalence of the theta-minus/theta-plus forms at probe points.
        CheckResult c;
        c.name = "branch-equivalence";
        double worst = 0.0;
        const double r_hi = std::min(config.r_max > 0 ? config.r_max : 1e4 * data.mass_scale(),
                                     data.r_max());
        for (double fr : {0.003, 0.02, 0.1, 0.45, 0.9}) {
            const double r = fr * r_hi;
            for (double v : {-0.7, -0.3, 0.0, 0.3, 0.7}) {
                const double a = ode_rhs(data, r, v, Branch::ThetaMinus);
                const double b = ode_rhs(data, r, v, Branch::ThetaPlus);
                const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
                worst = std::max(worst, std::abs(a - b) / scale);
            }
        }
        c.norm_sup = worst;
        c.pass = worst <= 1e-12;
        rep.checks.push_back(c);
    }

    rep.pass = true;
    for (auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

}  // namespace jang
