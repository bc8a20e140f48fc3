// Acceptance suite: one pass/fail line per criterion.
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "jang/errors.hpp"
#include "jang/geometry.hpp"
#include "jang/initial_data.hpp"
#include "jang/jang_solver.hpp"
#include "jang/numerics.hpp"
#include "jang/pipeline.hpp"
#include "jang/verifier.hpp"

using namespace jang;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

struct PgLevel {
    double sup_m = 0.0, sup_q = 0.0, sup_deficit = 0.0, sup_energy = 0.0, sup_phi = 0.0;
};

// Painleve-Gullstrand sampled at n_data nodes, solved on a ~1e4-node output
// grid; sup norms of the equality-case residuals outside a 10-cell layer.
// The refinement variable is the data resolution: with the closed form the
// equality residuals sit at the solver floor (~1e-12) and nothing measurable
// refines, while interpolated data carry O(h_data^3..4) derivative error
// through every quantity. The solve gate stays off: an interpolant's
// second-derivative kinks set a residual floor above 1e-6 that reflects data
// regularity, not equation-form inconsistency (criterion 7 asserts the gate
// on the closed-form solves).
PgLevel pg_sampled_level(std::size_t n_data) {
    auto exact = build_builtin("painleve-gullstrand", {{"M", 1.0}, {"rmax", 1.2e4}});
    std::vector<double> nodes(n_data);
    const double rmax = 1.1e4;
    const double lambda = std::acosh(rmax + 1.0);
    for (std::size_t i = 0; i < n_data; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n_data - 1);
        nodes[i] = std::cosh(lambda * t) - 1.0;
    }
    nodes[0] = 0.0;
    auto data = resample(exact, nodes);

    SolverConfig cfg;
    cfg.nodes = 16384;
    cfg.r_max = 1e4;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    cfg.gate_enabled = false;
    auto sol = solve(data, BoundaryCondition::past_horizon(), cfg);
    auto geom = build_geometry(data, sol);

    PgLevel out;
    const std::size_t layer = 10;
    // Constraint densities and q inside the first data cell are limited by
    // the interpolant's boundary extrapolation; the windowed sup starts at
    // the first data knot (the data-grid version of the boundary layer).
    const double r_window = nodes[1];
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        out.sup_m = std::max(out.sup_m, std::abs(geom.m[i] - 1.0));
        const double rho = geom.rho[i];
        out.sup_phi = std::max(out.sup_phi,
                               std::abs(sol.phi[i] - std::sqrt(std::max(1.0 - 2.0 / rho, 0.0))));
        if (i < layer || sol.grid[i] < r_window) continue;
        out.sup_q = std::max(out.sup_q, std::sqrt(q_norm2(data, sol, i)));
        out.sup_deficit =
            std::max(out.sup_deficit, std::sqrt(deficit_components(data, sol, i).norm2));
        out.sup_energy =
            std::max(out.sup_energy, std::abs(energy_momentum(data, sol.grid[i]).mu -
                                              current_pairing(data, sol, i).Jw));
    }
    return out;
}

}  // namespace

// 1. Equality case, static slice.
void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    auto data = build_builtin("schwarzschild-static", {{"M", 1.0}});
    SolverConfig cfg;
    cfg.nodes = 2000;
    auto sol = solve(data, BoundaryCondition::regular(0.0), cfg);
    auto geom = build_geometry(data, sol);
    auto pen = penrose_report(data, sol, geom);
    auto rig = rigidity_check(data, sol, geom, pen, 1e-8);
    const double t = elapsed_s(t0);

    double max_v = 0.0, max_m = 0.0;
    for (double v : sol.v) max_v = std::max(max_v, std::abs(v));
    for (double m : geom.m) max_m = std::max(max_m, std::abs(m - 1.0));
    const double rig_worst = std::max({rig.res_energy, rig.res_deficit, rig.res_q, rig.res_phi,
                                       rig.res_gbar});
    const bool pass = max_v <= 1e-10 && max_m <= 1e-8 && std::abs(pen.margin) <= 1e-6 &&
                      rig.applicable && rig_worst <= 1e-8 && t < 1.0;
    report(1, "schwarzschild-static equality end-to-end", pass,
           "max|v|=" + fmt(max_v) + " sup|m-1|=" + fmt(max_m) + " |margin|=" +
               fmt(std::abs(pen.margin)) + " rigidity=" + fmt(rig_worst) + " t=" + fmt(t) + "s");
}

// 2. Equality case, dynamical slice, refining under data-grid halving.
void criterion2() {
    const std::size_t levels[3] = {256, 512, 1024};
    PgLevel lv[3];
    double worst_t = 0.0;
    for (int l = 0; l < 3; ++l) {
        const auto t0 = std::chrono::steady_clock::now();
        lv[l] = pg_sampled_level(levels[l]);
        worst_t = std::max(worst_t, elapsed_s(t0));
    }
    auto order = [&](auto get) {
        return num::convergence_order(get(lv[0]), get(lv[1]), get(lv[2]));
    };
    const double om = order([](const PgLevel& x) { return x.sup_m; });
    const double oq = order([](const PgLevel& x) { return x.sup_q; });
    const double od = order([](const PgLevel& x) { return x.sup_deficit; });
    const double oe = order([](const PgLevel& x) { return x.sup_energy; });
    const bool bounds = lv[2].sup_m <= 1e-3 && lv[2].sup_q <= 1e-3 && lv[2].sup_deficit <= 1e-3 &&
                        lv[2].sup_energy <= 1e-3 && lv[2].sup_phi <= 1e-3;
    const bool orders = om >= 1.9 && oq >= 1.9 && od >= 1.9 && oe >= 1.9;
    const bool pass = bounds && orders && worst_t < 30.0;
    report(2, "painleve-gullstrand equality with singular start", pass,
           "sup|m-1|=" + fmt(lv[2].sup_m) + " orders m/q/def/mu-Jw=" + fmt(om) + "/" + fmt(oq) +
               "/" + fmt(od) + "/" + fmt(oe) + " sup|phi-ref|=" + fmt(lv[2].sup_phi) +
               " t=" + fmt(worst_t) + "s");
}

// 3. Strict inequality on the bumped family.
void criterion3() {
    auto data = build_builtin("bumped-conformal", {{"M", 1.0}, {"eps", 0.01}});
    SolverConfig cfg;
    cfg.nodes = 4096;
    auto sol = solve(data, BoundaryCondition::regular(0.0), cfg);
    auto geom = build_geometry(data, sol);
    auto grid = sol.grid;
    auto dec = check_dec(data, grid);
    auto pen = penrose_report(data, sol, geom, dec.pass);
    const bool pass = pen.margin > 3.0 * pen.m_adm_uncertainty &&
                      std::abs(pen.m_adm - 1.02) <= std::max(pen.m_adm_uncertainty, 2e-5) &&
                      dec.pass && pen.pass;
    report(3, "bumped-conformal strict inequality", pass,
           "margin=" + fmt(pen.margin) + " unc=" + fmt(pen.m_adm_uncertainty) + " M_ADM=" +
               fmt(pen.m_adm) + " dec=" + (dec.pass ? "pass" : "fail"));
}

// 4. Scalar-curvature identity: sup-residual halving factor in [3.4, 4.6] on all
// three families across 3 levels.
void criterion4() {
    struct Case {
        const char* family;
        Params p;
        BoundaryCondition bc;
    };
    const Case cases[] = {
        {"schwarzschild-static", {{"M", 1.0}}, BoundaryCondition::regular(0.0)},
        {"painleve-gullstrand", {{"M", 1.0}}, BoundaryCondition::past_horizon()},
        {"bumped-conformal", {{"M", 1.0}, {"eps", 0.01}}, BoundaryCondition::regular(0.0)},
    };
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        auto data = build_builtin(c.family, c.p);
        double sup[3];
        for (int l = 0; l < 3; ++l) {
            SolverConfig cfg;
            cfg.nodes = 1024u << l;
            auto sol = solve(data, c.bc, cfg);
            sup[l] = curvature_identity_residual(data, sol, DerivativeSource::GridFd).sup;
        }
        const double f1 = sup[0] / sup[1], f2 = sup[1] / sup[2];
        pass = pass && f1 >= 3.4 && f1 <= 4.6 && f2 >= 3.4 && f2 <= 4.6;
        detail += std::string(c.family) + ":" + fmt(f1) + "," + fmt(f2) + " ";
    }
    report(4, "scalar-curvature identity refinement factors", pass, detail);
}

// 5. Boundary cancellations.
void criterion5() {
    auto pg = build_builtin("painleve-gullstrand", {{"M", 1.0}});
    SolverConfig cfg;
    cfg.nodes = 8192;
    auto sol = solve(pg, BoundaryCondition::past_horizon(), cfg);
    const double b_first = std::abs(boundary_integrand(pg, sol, 1));

    auto flat = build_builtin("flat");
    SolverConfig cfg2;
    cfg2.nodes = 4096;
    auto sol2 = solve(flat, BoundaryCondition::regular(0.5), cfg2);
    std::vector<double> rt, bt;
    for (std::size_t i = 0; i < sol2.grid.size(); ++i) {
        if (sol2.grid[i] < 0.1 * sol2.grid.r_max()) continue;
        rt.push_back(sol2.grid[i]);
        bt.push_back(boundary_integrand(flat, sol2, i));
    }
    auto fit = num::fit_decay_exponent(rt, bt);
    const double expo = fit ? fit->exponent : 0.0;
    const bool pass = b_first <= 1e-3 && expo >= 0.9;
    report(5, "boundary term cancellations", pass,
           "|B(r_1)|=" + fmt(b_first) + " tail exponent=" + fmt(expo));
}

// 6. A priori bound and failure modes.
void criterion6() {
    bool never_exceeds = true;
    {
        auto pg = build_builtin("painleve-gullstrand", {{"M", 1.0}});
        SolverConfig cfg;
        cfg.nodes = 4096;
        auto sol = solve(pg, BoundaryCondition::past_horizon(), cfg);
        for (std::size_t i = 1; i < sol.grid.size(); ++i)
            never_exceeds = never_exceeds && std::abs(sol.v[i]) < 1.0;
    }
    bool typed_error = false;
    bool no_result = true;
    {
        // synthetic horizon-condition-violating data: kb inflated on a window
        auto base = build_builtin("painleve-gullstrand", {{"M", 1.0}});
        const double rmax = 300.0;
        std::vector<double> r, g11, rho, ka, kb;
        const double lambda = std::acosh(rmax + 1.0);
        for (int i = 0; i <= 6000; ++i) {
            const double t = static_cast<double>(i) / 6000.0;
            const double rr = std::cosh(lambda * t) - 1.0;
            r.push_back(rr);
            g11.push_back(1.0);
            rho.push_back(base.rho(rr));
            ka.push_back(base.ka(rr));
            kb.push_back(base.kb(rr) * (1.0 + 3.0 * std::exp(-std::pow((rr - 10.0) / 1.5, 2))));
        }
        auto data = load_sampled(r, g11, rho, ka, kb);
        SolverConfig cfg;
        cfg.nodes = 2048;
        cfg.r_max = 250.0;
        try {
            auto sol = solve(data, BoundaryCondition::past_horizon(), cfg);
            no_result = false;
        } catch (const SolveError& e) {
            typed_error = e.code == SolveErrorCode::InteriorBlowup;
        }
    }
    const bool pass = never_exceeds && typed_error && no_result;
    report(6, "a priori bound and blow-up failure mode", pass,
           std::string("interior |v|<1: ") + (never_exceeds ? "yes" : "no") +
               ", typed error on horizon-condition violation: " + (typed_error ? "yes" : "no"));
}

// 7. Equation-form consistency.
void criterion7() {
    bool pass = true;
    std::string detail;
    struct Case {
        const char* family;
        Params p;
        BoundaryCondition bc;
    };
    const Case cases[] = {
        {"schwarzschild-static", {{"M", 1.0}}, BoundaryCondition::regular(0.0)},
        {"painleve-gullstrand", {{"M", 1.0}}, BoundaryCondition::past_horizon()},
        {"bumped-conformal", {{"M", 1.0}, {"eps", 0.01}}, BoundaryCondition::regular(0.0)},
        {"flat", {}, BoundaryCondition::regular(0.5)},
        {"flat", {}, BoundaryCondition::regular(-0.5)},
    };
    double worst_cross = 0.0;
    for (const auto& c : cases) {
        auto data = build_builtin(c.family, c.p);
        SolverConfig cfg;
        cfg.nodes = 4096;
        auto sol = solve(data, c.bc, cfg);
        worst_cross = std::max(worst_cross, sol.diag.cross_residual_sup);
    }
    pass = worst_cross <= 1e-6;
    // branch equivalence at probe points on data with g11 != 1
    double worst_branch = 0.0;
    auto d = build_builtin("schwarzschild-static", {{"M", 1.0}});
    for (double r : {0.5, 2.0, 11.0, 300.0})
        for (double v : {-0.8, -0.2, 0.4, 0.9}) {
            const double a = ode_rhs(d, r, v, Branch::ThetaMinus);
            const double b = ode_rhs(d, r, v, Branch::ThetaPlus);
            worst_branch = std::max(worst_branch,
                                    std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30}));
        }
    pass = pass && worst_branch <= 1e-12;
    report(7, "equation-form consistency", pass,
           "sup cross-residual=" + fmt(worst_cross) + " branch rel diff=" + fmt(worst_branch));
}

// 8. Tail decay exponents for alpha boundary values on fall-off-compliant data.
void criterion8() {
    auto flat = build_builtin("flat");
    bool pass = true;
    std::string detail;
    for (double alpha : {-0.5, 0.0, 0.5}) {
        SolverConfig cfg;
        cfg.nodes = 8192;
        auto sol = solve(flat, BoundaryCondition::regular(alpha), cfg);
        auto rep = asymptotic_report(sol);
        if (alpha == 0.0) {
            pass = pass && rep.zero_tail;  // v == 0: flagged, bound holds trivially
            detail += "a=0:zero-tail ";
        } else {
            pass = pass && rep.exponent_v >= 1.9 && rep.exponent_vr >= 2.9;
            detail += "a=" + fmt(alpha) + ":" + fmt(rep.exponent_v) + "/" +
                      fmt(rep.exponent_vr) + " ";
        }
    }
    report(8, "tail decay exponents", pass, detail);
}

// 9. Determinism of the batch suite.
void criterion9() {
    auto make_cfgs = [] {
        std::vector<RunConfig> cfgs;
        for (auto fam : {"schwarzschild-static", "painleve-gullstrand", "bumped-conformal"}) {
            Json j = {{"data", {{"family", fam}, {"params", {{"M", 1.0}, {"eps", 0.01}}}}},
                      {"solver", {{"nodes", 1024}}},
                      {"checks", "all"}};
            cfgs.push_back(parse_run_config(j));
        }
        return cfgs;
    };
    auto scrub = [](Json j) {
        std::function<void(Json&)> rec = [&](Json& node) {
            if (node.is_object()) {
                node.erase("timings");
                for (auto& [k, v] : node.items()) rec(v);
            } else if (node.is_array()) {
                for (auto& v : node) rec(v);
            }
        };
        rec(j);
        return j.dump();
    };
    auto a = run_batch(make_cfgs(), 3);
    auto b = run_batch(make_cfgs(), 3);
    const bool pass = scrub(a.json) == scrub(b.json) && a.exit_code == 0;
    report(9, "batch determinism", pass,
           pass ? "byte-identical comparable sections" : "reports differ");
}

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures == 0) {
        std::printf("acceptance: all criteria PASS\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
