#include <doctest.h>

#include <cmath>

#include "jang/geometry.hpp"
#include "jang/initial_data.hpp"
#include "jang/jang_solver.hpp"
#include "jang/numerics.hpp"
#include "jang/verifier.hpp"

using namespace jang;

namespace {

struct Solved {
    InitialData data;
    JangSolution sol;
    GeometryProfile geom;
};

Solved make(const char* family, Params p, BoundaryCondition bc, std::size_t nodes = 2048) {
    Solved out;
    out.data = build_builtin(family, p);
    SolverConfig cfg;
    cfg.nodes = nodes;
    out.sol = solve(out.data, bc, cfg);
    out.geom = build_geometry(out.data, out.sol);
    return out;
}

}  // namespace

TEST_CASE("q, deficit and current pairing on trivial solutions") {
    auto s = make("schwarzschild-static", {{"M", 1.0}}, BoundaryCondition::regular(0.0));
    for (std::size_t i : {1u, 50u, 500u, 1500u}) {
        CHECK(q_component(s.data, s.sol, i) == doctest::Approx(0.0));
        auto de = deficit_components(s.data, s.sol, i);
        CHECK(de.angular == doctest::Approx(0.0));
        CHECK(de.radial == doctest::Approx(0.0));
        auto cp = current_pairing(s.data, s.sol, i);
        CHECK(cp.Jw == doctest::Approx(0.0));
        CHECK(cp.w_norm == std::abs(s.sol.v[i]));
        CHECK(std::abs(boundary_integrand(s.data, s.sol, i)) < 1e-18);
    }
}

TEST_CASE("two q routes agree and |w| = |v| exactly") {
    auto s = make("painleve-gullstrand", {{"M", 1.0}}, BoundaryCondition::past_horizon(), 4096);
    for (std::size_t i = 1; i < s.sol.grid.size(); i += 97) {
        const double a = q_component(s.data, s.sol, i);
        const double b = q_component_definitional(s.data, s.sol, i);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
        CHECK(current_pairing(s.data, s.sol, i).w_norm == std::abs(s.sol.v[i]));
    }
}

TEST_CASE("deficit radial eigenvalue: trace identity against the graph oracle") {
    // h(X1,X1) from the graph embedding (6.14)-style, with f_r reconstructed
    // and f_rr finite-differenced; gbar^11 (h11 - K11) must equal -2*lambda.
    auto s = make("painleve-gullstrand", {{"M", 1.0}}, BoundaryCondition::past_horizon(), 4096);
    const auto& d = s.data;
    const auto& sol = s.sol;
    for (std::size_t i : {600u, 1200u, 2400u}) {
        const double r = sol.grid[i];
        const double v = sol.v[i];
        const double g = d.g11(r);
        auto fr_opt = reconstruct_f_r(d, sol, i);
        REQUIRE(fr_opt.has_value());
        const double fr = *fr_opt;
        const double h = 0.5 * (sol.grid[i + 1] - sol.grid[i - 1]);
        const double frp = *reconstruct_f_r(d, sol, i + 1);
        const double frm = *reconstruct_f_r(d, sol, i - 1);
        const double f_rr = (frp - frm) / (sol.grid[i + 1] - sol.grid[i - 1]);
        (void)h;
        const double phi = sol.phi[i];
        const double sq = std::sqrt((1.0 - v) * (1.0 + v));
        const double phi_r = -v * sol.v_r[i] / sq * d.rho_r(r) / std::sqrt(g) +
                             sq * d.rho_rr(r) / std::sqrt(g) -
                             sq * d.rho_r(r) * d.g11_r(r) / (2.0 * std::pow(g, 1.5));
        // h11 = [f_;rr + 2 (log phi)_r f_r + phi (g^11 phi_r) f_r^3] / sqrt(phi^-2 + g^11 f_r^2)
        const double f_cov_rr = f_rr - 0.5 * d.g11_r(r) / g * fr;
        const double root = std::sqrt(1.0 / (phi * phi) + fr * fr / g);
        const double h11 =
            (f_cov_rr + 2.0 * (phi_r / phi) * fr + phi * (phi_r / g) * fr * fr * fr) / root;
        const double k44 = k44_profile(d, sol, i);
        const double K11 = d.g11(r) * d.ka(r) + fr * fr * k44;
        const double gbar11_inv = (1.0 - v) * (1.0 + v) / g;
        const double lam_r_oracle = gbar11_inv * (h11 - K11);
        const double lam_r = deficit_components(d, sol, i).radial;
        CHECK(lam_r_oracle == doctest::Approx(lam_r).epsilon(5e-4));
    }
}

TEST_CASE("scalar curvature identity") {
    SUBCASE("static slice, analytic route: every term vanishes") {
        auto s = make("schwarzschild-static", {{"M", 1.0}}, BoundaryCondition::regular(0.0));
        auto th = curvature_identity_residual(s.data, s.sol, DerivativeSource::FromData);
        CHECK(th.sup < 1e-9);
    }
    SUBCASE("grid route refines at 2nd order on all three families") {
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
        for (const auto& c : cases) {
            double sup[3];
            for (int l = 0; l < 3; ++l) {
                auto s = make(c.family, c.p, c.bc, 1024u << l);
                sup[l] = curvature_identity_residual(s.data, s.sol, DerivativeSource::GridFd).sup;
            }
            CHECK(sup[0] / sup[1] > 3.4);
            CHECK(sup[0] / sup[1] < 4.6);
            CHECK(sup[1] / sup[2] > 3.4);
            CHECK(sup[1] / sup[2] < 4.6);
        }
    }
    SUBCASE("bumped time-symmetric case reduces to the constraint") {
        auto s1 = make("bumped-conformal", {{"M", 1.0}, {"eps", 0.01}},
                       BoundaryCondition::regular(0.0), 2048);
        auto s2 = make("bumped-conformal", {{"M", 1.0}, {"eps", 0.01}},
                       BoundaryCondition::regular(0.0), 4096);
        const double a = curvature_identity_residual(s1.data, s1.sol, DerivativeSource::GridFd).sup;
        const double b = curvature_identity_residual(s2.data, s2.sol, DerivativeSource::GridFd).sup;
        CHECK(a / b > 3.0);
    }
}

TEST_CASE("bulk nonnegativity on DEC data") {
    for (const char* fam : {"schwarzschild-static", "painleve-gullstrand", "bumped-conformal"}) {
        auto s = make(fam, {{"M", 1.0}, {"eps", 0.01}},
                      std::string(fam) == "painleve-gullstrand"
                          ? BoundaryCondition::past_horizon()
                          : BoundaryCondition::regular(0.0));
        for (std::size_t i = 10; i < s.sol.grid.size(); i += 53) {
            const double mu_Jw = energy_momentum(s.data, s.sol.grid[i]).mu -
                                 current_pairing(s.data, s.sol, i).Jw;
            const double integrand =
                s.sol.phi[i] * (2.0 * mu_Jw + deficit_components(s.data, s.sol, i).norm2 +
                                2.0 * q_norm2(s.data, s.sol, i));
            CHECK(integrand >= -1e-8);
        }
    }
}

TEST_CASE("penrose report: equality and strict inequality") {
    SUBCASE("static slice: zero margin, PASS") {
        auto s = make("schwarzschild-static", {{"M", 1.0}}, BoundaryCondition::regular(0.0));
        auto rep = penrose_report(s.data, s.sol, s.geom);
        CHECK(rep.pass);
        CHECK(std::abs(rep.margin) <= 1e-6);
        CHECK(rep.decomposition_consistent);
        auto rg = rigidity_check(s.data, s.sol, s.geom, rep, 1e-8);
        CHECK(rg.applicable);
        CHECK(rg.pass);
    }
    SUBCASE("painleve-gullstrand: equality within 1e-3") {
        auto s = make("painleve-gullstrand", {{"M", 1.0}}, BoundaryCondition::past_horizon(), 8192);
        auto rep = penrose_report(s.data, s.sol, s.geom);
        CHECK(rep.pass);
        CHECK(std::abs(rep.margin) <= 1e-3);
        auto rg = rigidity_check(s.data, s.sol, s.geom, rep, 1e-3);
        CHECK(rg.applicable);
        CHECK(rg.pass);
        CHECK(rg.res_q <= 1e-3);
        CHECK(rg.res_deficit <= 1e-3);
        CHECK(rg.res_energy <= 1e-3);
        CHECK(rg.res_phi <= 1e-3);
    }
    SUBCASE("bumped: strictly positive margin, rigidity non-applicable") {
        auto s = make("bumped-conformal", {{"M", 1.0}, {"eps", 0.01}},
                      BoundaryCondition::regular(0.0), 4096);
        auto rep = penrose_report(s.data, s.sol, s.geom);
        CHECK(rep.pass);
        CHECK(rep.margin > 3.0 * rep.m_adm_uncertainty);
        CHECK(rep.m_adm == doctest::Approx(1.02).epsilon(1e-4));
        CHECK(rep.decomposition_consistent);
        auto rg = rigidity_check(s.data, s.sol, s.geom, rep);
        CHECK_FALSE(rg.applicable);
        CHECK_FALSE(rg.note.empty());
    }
    SUBCASE("upstream DEC failure flags the report") {
        auto s = make("schwarzschild-static", {{"M", 1.0}}, BoundaryCondition::regular(0.0));
        auto rep = penrose_report(s.data, s.sol, s.geom, /*dec_passed=*/false);
        CHECK_FALSE(rep.pass);
        CHECK(rep.verdict == "FAIL");
    }
}

TEST_CASE("decomposition identity on a regular alpha start") {
    // Flat vacuum with alpha = 0.5: no horizon, nonzero deficit, q and inner
    // boundary term. m(inf) - m(0) must still equal the bulk integrals plus
    // the signed boundary contribution; this pins the divergence-theorem
    // orientation independently of the equality cases (where everything is 0).
    auto flat = build_builtin("flat");
    SolverConfig cfg;
    cfg.nodes = 8192;
    auto sol = solve(flat, BoundaryCondition::regular(0.5), cfg);
    auto geom = build_geometry(flat, sol);
    auto rep = penrose_report(flat, sol, geom);
    // m(0) = rho0/2 (1 - (1 - alpha^2)) = alpha^2/2; m(inf) = 0
    CHECK(geom.m[0] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(rep.m_adm == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(rep.mass_profile_margin == doctest::Approx(-0.125).epsilon(1e-6));
    CHECK(rep.boundary_inner == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rep.decomposition_consistent);
    CHECK(std::abs(rep.decomposition.total() - rep.mass_profile_margin) < 1e-6);
    // bulk pieces strictly positive, divergence strictly negative here
    CHECK(rep.decomposition.deficit > 0.0);
    CHECK(rep.decomposition.q_term > 0.0);
    CHECK(rep.decomposition.divergence == doctest::Approx(-0.25).epsilon(1e-8));
}

TEST_CASE("boundary integrand limits") {
    SUBCASE("horizon start: B -> 0 at the inner boundary") {
        auto s = make("painleve-gullstrand", {{"M", 1.0}}, BoundaryCondition::past_horizon(), 4096);
        CHECK(std::abs(boundary_integrand(s.data, s.sol, 1)) < 1e-3);
        CHECK(std::abs(boundary_integrand(s.data, s.sol, 0)) < 1e-8);
    }
    SUBCASE("tail decay for fall-off-compliant data") {
        auto flat = build_builtin("flat");
        SolverConfig cfg;
        cfg.nodes = 4096;
        auto sol = solve(flat, BoundaryCondition::regular(0.5), cfg);
        std::vector<double> rt, bt;
        for (std::size_t i = 0; i < sol.grid.size(); ++i) {
            if (sol.grid[i] < 0.1 * sol.grid.r_max()) continue;
            rt.push_back(sol.grid[i]);
            bt.push_back(boundary_integrand(flat, sol, i));
        }
        auto fit = num::fit_decay_exponent(rt, bt);
        REQUIRE(fit.has_value());
        CHECK(fit->exponent >= 0.9);
    }
}

TEST_CASE("verification report aggregates checks with orders") {
    auto data = build_builtin("painleve-gullstrand", {{"M", 1.0}});
    SolverConfig cfg;
    cfg.nodes = 1024;
    auto rep = run_verification(data, BoundaryCondition::past_horizon(), cfg, 3);
    CHECK(rep.pass);
    bool saw_theorem1 = false;
    for (auto& c : rep.checks) {
        if (c.name == "scalar-curvature-identity") {
            saw_theorem1 = true;
            CHECK(c.order >= 1.9);
        }
        CHECK(c.pass);
    }
    CHECK(saw_theorem1);
}
