#pragma once

#include <vector>

#include "jang/initial_data.hpp"
#include "jang/jang_solver.hpp"

namespace jang {

// Hawking mass from the Schwarzschild-form ansatz: 2m = rho (1 - rho_s^2).
inline double hawking_mass(double rho, double rho_s) {
    return 0.5 * rho * (1.0 - rho_s * rho_s);
}

struct AdmEstimate {
    double value = 0.0;
    double uncertainty = 0.0;
};

// Jang-surface geometry sampled on the solution grid. rho_s is the algebraic
// warping factor; rho_ss comes from the chain rule
// (d rho_s/dr)/(ds/dr) with the derivative taken on the grid.
struct GeometryProfile {
    RadialGrid grid;
    std::vector<double> s, rho, rho_s, rho_ss, m, Rbar, area, Hbar;
    AdmEstimate adm;
};

GeometryProfile build_geometry(const InitialData& data, const JangSolution& sol);

// R_bar = 2 rho^-2 (1 - 2 rho rho_ss - rho_s^2).
inline double rbar_direct(double rho, double rho_s, double rho_ss) {
    return 2.0 / (rho * rho) * (1.0 - 2.0 * rho * rho_ss - rho_s * rho_s);
}

// Cross-check path for rho_ss: finite differences of rho_s against the
// arclength values themselves (instead of dividing the r-derivative by the
// analytic ds/dr). Agrees with the profile's rho_ss to O(h^2).
std::vector<double> rho_ss_sgrid(const GeometryProfile& g);

struct MassCheckNorms {
    double sup = 0.0;
    double l2 = 0.0;
    std::size_t window_begin = 0, window_end = 0;
};
// Residual of the Hawking-mass derivative identity: 2 dm/ds - 1/2 rho_s rho^2 Rbar, with dm/ds differenced
// on the grid; vanishes to discretization order. The first boundary_layer
// cells and the outermost node are excluded.
MassCheckNorms mass_derivative_check(const GeometryProfile& g, std::size_t boundary_layer = 10);

// ADM mass as the Hawking-mass limit: least-squares extrapolation of m(r) in
// powers of 1/r over the outer decade; the uncertainty is the spread across
// extrapolation orders 1..3. Throws DomainError when the spread exceeds 1%
// of the value (non-convergent tail).
AdmEstimate adm_mass(const GeometryProfile& g);

}  // namespace jang
