#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jang/grid.hpp"
#include "jang/initial_data.hpp"

namespace jang {

enum class Branch { Auto, ThetaMinus, ThetaPlus };

struct BoundaryCondition {
    enum class Kind { Alpha, PastHorizon, FutureHorizon };
    Kind kind = Kind::Alpha;
    double alpha = 0.0;

    static BoundaryCondition regular(double a) { return {Kind::Alpha, a}; }
    static BoundaryCondition past_horizon() { return {Kind::PastHorizon, 1.0}; }
    static BoundaryCondition future_horizon() { return {Kind::FutureHorizon, -1.0}; }
};

struct SolverConfig {
    double r_max = 0.0;          // outer cutoff; 0 = min(1e4 * mass scale, data r_max)
    double rel_tol = 1e-10;      // step controller relative tolerance
    double abs_tol = 1e-12;      // step controller absolute tolerance
    double series_cutoff = 0.0;  // singular-start series extent; 0 = adaptive
    double clamp_margin = 1e-12; // guard distance from |v| = 1
    Branch branch = Branch::Auto;
    std::size_t nodes = 4096;    // output grid size
    double residual_gate = 1e-6; // sup-norm gate on the unreduced-form cross residual
    bool gate_enabled = true;
};

struct SolveDiagnostics {
    std::size_t n_steps = 0;
    std::size_t n_rejected = 0;
    double eps_series = 0.0;
    double v0 = 0.0;
    double slope0 = 0.0;
    Branch branch_used = Branch::ThetaMinus;
    double cross_residual_sup = 0.0;
    double cross_residual_l2 = 0.0;
    double decay_exponent_v = 0.0;   // 0 when not fitted
    double decay_exponent_vr = 0.0;
    bool zero_tail = false;
};

// Solution of the generalized Jang equation in ODE form, on a radial grid
// with r = 0 at the inner boundary. phi is the warping factor rho_{,s}.
struct JangSolution {
    RadialGrid grid;
    std::vector<double> v, v_r, s, phi;
    BoundaryCondition boundary;
    SolveDiagnostics diag;
};

// F_{-+}(r, v): the non-theta part of the reduced ODE form,
//   sqrt(g^11)(1-v^2) v_r + (1-v^2) F_{-+} +- theta_{-+} = 0,
// obtained from the warped-graph equation by substituting phi = rho_{,s}.
// The rho_rr and g11_r terms both carry sqrt(g^11):
//   F_{-+} = -+2 sqrt(g^11) (rho_r/rho)/(1 +- v) - ka
//            + sqrt(g^11) v rho_rr/rho_r - sqrt(g^11) v g11_r/(2 g11),
// and the two branches agree identically wherever |v| < 1 (the cross
// residual check arbitrates any transcription slip).
double F_minus(const InitialData& data, double r, double v);
double F_plus(const InitialData& data, double r, double v);

// dv/dr from either rearrangement of the equation. Throws DomainError when
// r <= 0 or |v| >= 1 - clamp_margin.
double ode_rhs(const InitialData& data, double r, double v, Branch branch,
               double clamp_margin = 1e-12);

// Root of the horizon-start quadratic:
//   sqrt(g^11)(0) x^2 + F(0, v0) x - 1/2 theta_slope = 0,
// negative root for a past horizon (v0 = +1), positive for a future one.
double initial_slope(const InitialData& data, HorizonType type, double theta_slope0);
// Classifies, validates against the requested boundary and computes the slope.
double initial_slope(const InitialData& data, const BoundaryCondition& bc);

JangSolution solve(const InitialData& data, const BoundaryCondition& bc,
                   const SolverConfig& config = {});

struct ResidualNorms {
    double sup = 0.0;
    double l2 = 0.0;
    std::vector<double> profile;  // aligned with grid nodes; entry 0 unused
};

// Residual of the unreduced warped-graph form evaluated with the numerically
// reconstructed phi_r/phi. Independent consistency check between the two
// equation forms; gates solve acceptance.
ResidualNorms cross_form_residual(const InitialData& data, const JangSolution& sol);

// Independent recomputation of the arclength s(r) (cellwise Gauss quadrature
// on Hermite-interpolated v, with a sqrt substitution through the singular
// first cell) and of phi = rho_{,s}.
struct ArclengthProfile {
    std::vector<double> s, phi;
};
ArclengthProfile arclength_and_phi(const InitialData& data, const JangSolution& sol);

// k44 = phi * phi_r * sqrt(g^11) * v (spherical reduction of the time-time
// extension component); phi_r evaluated analytically from the data and v_r.
double k44_profile(const InitialData& data, const JangSolution& sol, std::size_t i);

// Graph-function slope f_r = v sqrt(g11) / (phi sqrt(1 - v^2)); only defined
// where |v| < 1 - 1e-6 (f blows up at the horizon by construction).
std::optional<double> reconstruct_f_r(const InitialData& data, const JangSolution& sol,
                                      std::size_t i);

struct AsymptoticReport {
    bool zero_tail = false;
    double exponent_v = 0.0;
    double exponent_vr = 0.0;
    double sup_r2_v = 0.0;
    std::size_t tail_points = 0;
};
// Log-log decay fit of |v| and |v_r| over the outer decade.
AsymptoticReport asymptotic_report(const JangSolution& sol, double zero_tail_floor = 1e-11);

}  // namespace jang
