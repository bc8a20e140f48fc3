#pragma once

#include <string>
#include <vector>

#include "jang/geometry.hpp"
#include "jang/initial_data.hpp"
#include "jang/jang_solver.hpp"

namespace jang {

// Which derivative route feeds the identity checks. FromData uses the data
// set's own derivative access (analytic or interpolant) with the chain-rule
// rho_ss; GridFd differences the gridded profiles with strictly 2nd-order
// stencils, so identity residuals converge at 2nd order under grid halving.
enum class DerivativeSource { FromData, GridFd };

// Angular eigenvalue of (h - K|_Sigma) in the gbar frame:
//   lambda = sqrt(g^11) v rho_r/rho - kb.
// The radial eigenvalue is -2*lambda by the trace-zero Jang equation.
double deficit_angular(const InitialData& data, const JangSolution& sol, std::size_t i);

struct DeficitEigenvalues {
    double angular = 0.0;
    double radial = 0.0;
    double norm2 = 0.0;  // |h - K|_Sigma|^2_gbar = 6 lambda^2
};
DeficitEigenvalues deficit_components(const InitialData& data, const JangSolution& sol,
                                      std::size_t i);

// Boundary-term closed form q1 = -2 sqrt(g11) v/(1-v^2) * lambda.
double q_component(const InitialData& data, const JangSolution& sol, std::size_t i);
// Definitional route (deficit contracted with the graph gradient): q1 = gbar_11 * w^1 * (radial deficit).
double q_component_definitional(const InitialData& data, const JangSolution& sol, std::size_t i);
// |q|^2_gbar = (1-v^2)/g11 * q1^2.
double q_norm2(const InitialData& data, const JangSolution& sol, std::size_t i);

struct CurrentPairing {
    double Jw = 0.0;      // J(w) = J_1 sqrt(g^11) v
    double w_norm = 0.0;  // |w|_g = |v|
};
CurrentPairing current_pairing(const InitialData& data, const JangSolution& sol, std::size_t i);

// Boundary integrand of the divergence term per unit round-sphere area:
//   B(r) = (2 rho_r v / sqrt(g11)) (sqrt(g^11) rho_r/rho v - kb) rho^2.
double boundary_integrand(const InitialData& data, const JangSolution& sol, std::size_t i);

struct IdentityResidual {
    std::vector<double> profile;  // aligned with grid nodes; zeros outside window
    double sup = 0.0;
    double l2 = 0.0;
    std::size_t window_begin = 0, window_end = 0;
};
// Pointwise residual of the scalar-curvature identity
//   Rbar = 16 pi (mu - J(w)) + |h-K|^2 + 2|q|^2 - 2 phi^-1 div(phi q),
// over the interior window (a 10-cell boundary layer near r = 0 is excluded,
// where phi -> 0 makes the pointwise identity 0/0).
IdentityResidual curvature_identity_residual(const InitialData& data, const JangSolution& sol,
                                 DerivativeSource src, std::size_t boundary_layer = 10);

// Bulk/boundary decomposition of m(inf) - m(0) = 1/4 int phi rho^2 Rbar ds
// with Rbar substituted from the scalar-curvature identity.
struct PenroseDecomposition {
    double energy = 0.0;      // 4 pi * int phi rho^2 (mu - J(w)) ds
    double deficit = 0.0;     // 1/4 * int phi rho^2 |h-K|^2 ds
    double q_term = 0.0;      // 1/2 * int phi rho^2 |q|^2 ds
    double divergence = 0.0;  // 1/2 [B(r_max) - B(0)]
    double total() const { return energy + deficit + q_term + divergence; }
};

struct PenroseReport {
    double m_adm = 0.0;
    double m_adm_uncertainty = 0.0;
    double area = 0.0;                // A = 4 pi rho(0)^2
    double margin = 0.0;              // M_ADM - sqrt(A/16 pi)
    double mass_profile_margin = 0.0; // m(inf) - m(0) from the profile
    PenroseDecomposition decomposition;
    double boundary_inner = 0.0, boundary_outer = 0.0;
    bool decomposition_consistent = false;
    double decomposition_tolerance = 0.0;
    bool dec_passed = true;
    std::string verdict;  // "PASS" or "FAIL"
    bool pass = false;
};
// Computes the margin two ways (mass profile and the bulk decomposition) and requires agreement within the combined tolerance.
PenroseReport penrose_report(const InitialData& data, const JangSolution& sol,
                             const GeometryProfile& geom, bool dec_passed = true);

struct RigidityReport {
    bool applicable = false;
    std::string note;
    double res_energy = 0.0;    // sup |mu - J(w)|
    double res_deficit = 0.0;   // sup |h - K|_gbar
    double res_q = 0.0;         // sup |q|_gbar
    double res_phi = 0.0;       // sup |phi - sqrt(1 - 2 M_ADM/rho)|
    double res_gbar = 0.0;      // sup |1/gbar_11 - (1 - 2 M_ADM/rho)|
    double tolerance = 0.0;
    bool pass = false;
};
// Equality-case characterization; only applicable when the margin vanishes
// within tolerance of the ADM extrapolation uncertainty.
RigidityReport rigidity_check(const InitialData& data, const JangSolution& sol,
                              const GeometryProfile& geom, const PenroseReport& rep,
                              double tolerance = 1e-3, std::size_t boundary_layer = 10);

struct CheckResult {
    std::string name;
    double norm_sup = 0.0;
    double norm_l2 = 0.0;
    double order = 0.0;  // 0 when no refinement study backs the check
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool pass = false;
};

// Runs the identity checks with a 3-level output-grid refinement study (the
// levels run concurrently); convergence orders are measured from h, h/2, h/4.
VerificationReport run_verification(const InitialData& data, const BoundaryCondition& bc,
                                    const SolverConfig& config, int levels = 3);

}  // namespace jang
