#include "jang/jang_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jang/errors.hpp"
#include "jang/numerics.hpp"

namespace jang {

namespace {

struct DataPoint {
    double sg;   // sqrt(g^11)
    double a;    // sqrt(g^11) rho_r / rho (half the mean curvature of S_r)
    double g11, g11_r;
    double rho, rho_r, rho_rr;
    double ka, kb;
};

DataPoint load(const InitialData& data, double r) {
    DataPoint p;
    p.g11 = data.g11(r);
    p.g11_r = data.g11_r(r);
    p.sg = 1.0 / std::sqrt(p.g11);
    p.rho = data.rho(r);
    p.rho_r = data.rho_r(r);
    p.rho_rr = data.rho_rr(r);
    p.ka = data.ka(r);
    p.kb = data.kb(r);
    p.a = p.sg * p.rho_r / p.rho;
    return p;
}

double F_from(const DataPoint& p, double v, int branch_sign) {
    // branch_sign = -1 for F_-, +1 for F_+. The leading term shares the
    // subexpression `a` with the theta terms so the v = 0 cancellation on
    // time-symmetric data is exact in floating point.
    const double lead = (branch_sign < 0) ? -2.0 * p.a / (1.0 + v) : +2.0 * p.a / (1.0 - v);
    double tail = 0.0;
    if (v != 0.0)  // avoid 0 * inf at coordinate-degenerate horizon spheres
        tail = p.sg * v * (p.rho_rr / p.rho_r) - p.sg * v * p.g11_r / (2.0 * p.g11);
    return lead - p.ka + tail;
}

double rhs_from(const DataPoint& p, double v, Branch branch) {
    const double one_m_v2 = (1.0 - v) * (1.0 + v);
    if (branch == Branch::ThetaMinus) {
        const double theta_m = 2.0 * (p.a - p.kb);
        return -(F_from(p, v, -1) + theta_m / one_m_v2) * std::sqrt(p.g11);
    }
    const double theta_p = 2.0 * (p.a + p.kb);
    return -(F_from(p, v, +1) - theta_p / one_m_v2) * std::sqrt(p.g11);
}

Branch pick_branch(const BoundaryCondition& bc, Branch requested) {
    if (bc.kind == BoundaryCondition::Kind::PastHorizon) {
        // F_+ carries 1/(1-v): unusable at v = +1.
        return Branch::ThetaMinus;
    }
    if (bc.kind == BoundaryCondition::Kind::FutureHorizon) return Branch::ThetaPlus;
    if (requested == Branch::Auto) return bc.alpha >= 0.0 ? Branch::ThetaMinus : Branch::ThetaPlus;
    return requested;
}

// Arclength integral over [r_lo, r_hi] with v given by a callable; handles an
// integrable 1/sqrt(r - r_sing) behavior at r_lo via the t = xi^2 substitution.
template <class VFn>
double arc_segment_sqrt(const InitialData& data, double r_lo, double r_hi, VFn&& vfn) {
    const double len = r_hi - r_lo;
    if (len <= 0.0) return 0.0;
    auto nodes = num::gauss_nodes(8);
    auto weights = num::gauss_weights(8);
    double acc = 0.0;
    for (int q = 0; q < 8; ++q) {
        const double xi = 0.5 * (nodes[q] + 1.0);  // in (0,1)
        const double t = r_lo + len * xi * xi;
        const double v = vfn(t);
        const double one_m_v2 = std::max((1.0 - v) * (1.0 + v), 1e-300);
        const double integrand = std::sqrt(data.g11(t) / one_m_v2) * 2.0 * len * xi;
        acc += 0.5 * weights[q] * integrand;
    }
    return acc;
}

// Plain Gauss cell integral of sqrt(g11/(1-v^2)) with cubic-Hermite v.
double arc_segment_hermite(const InitialData& data, double r0, double r1, double v0, double d0,
                           double v1, double d1) {
    const double h = r1 - r0;
    auto nodes = num::gauss_nodes(5);
    auto weights = num::gauss_weights(5);
    double acc = 0.0;
    for (int q = 0; q < 5; ++q) {
        const double t = 0.5 * (nodes[q] + 1.0);
        const double t2 = t * t, t3 = t2 * t;
        const double v = v0 * (2 * t3 - 3 * t2 + 1) + v1 * (-2 * t3 + 3 * t2) +
                         h * (d0 * (t3 - 2 * t2 + t) + d1 * (t3 - t2));
        const double r = r0 + h * t;
        const double one_m_v2 = std::max((1.0 - v) * (1.0 + v), 1e-300);
        acc += 0.5 * weights[q] * h * std::sqrt(data.g11(r) / one_m_v2);
    }
    return acc;
}

double phi_of(const InitialData& data, double r, double v) {
    const double one_m_v2 = std::max((1.0 - v) * (1.0 + v), 0.0);
    return std::sqrt(one_m_v2) * data.rho_r(r) / std::sqrt(data.g11(r));
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

double F_minus(const InitialData& data, double r, double v) {
    return F_from(load(data, r), v, -1);
}

double F_plus(const InitialData& data, double r, double v) {
    return F_from(load(data, r), v, +1);
}

double ode_rhs(const InitialData& data, double r, double v, Branch branch, double clamp_margin) {
    if (r <= 0.0 && data.r_min() >= 0.0)
        throw DomainError("ode_rhs: r must be positive");
    if (std::abs(v) >= 1.0 - clamp_margin)
        throw DomainError("ode_rhs: |v| at the singular bound");
    if (branch == Branch::Auto) branch = Branch::ThetaMinus;
    return rhs_from(load(data, r), v, branch);
}

double initial_slope(const InitialData& data, HorizonType type, double theta_slope0) {
    if (type != HorizonType::Past && type != HorizonType::Future)
        throw SolveError(SolveErrorCode::BadBoundary,
                         "initial_slope: singular start needs a Past or Future horizon");
    if (!(theta_slope0 > 0.0))
        throw SolveError(SolveErrorCode::BadHorizonSlope,
                         "initial_slope: theta slope at r=0 not positive; perturb data");
    const double v0 = (type == HorizonType::Past) ? 1.0 : -1.0;
    const double sg0 = data.sqrt_g11_inv(0.0);
    const double F0 = (type == HorizonType::Past) ? F_minus(data, 0.0, v0) : F_plus(data, 0.0, v0);
    auto roots = num::solve_quadratic(sg0, F0, -0.5 * theta_slope0);
    if (roots.count == 0)
        throw SolveError(SolveErrorCode::BadHorizonSlope, "initial_slope: no real root");
    // Root product is negative (theta_slope0 > 0), so one root of each sign.
    if (type == HorizonType::Past) {
        const double x = std::min(roots.x1, roots.x2);
        if (!(x < 0.0))
            throw SolveError(SolveErrorCode::BadHorizonSlope, "initial_slope: no negative root");
        return x;
    }
    const double x = std::max(roots.x1, roots.x2);
    if (!(x > 0.0))
        throw SolveError(SolveErrorCode::BadHorizonSlope, "initial_slope: no positive root");
    return x;
}

double initial_slope(const InitialData& data, const BoundaryCondition& bc) {
    auto cls = classify_horizon(data);
    if (bc.kind == BoundaryCondition::Kind::PastHorizon) {
        if (cls.type != HorizonType::Past)
            throw SolveError(SolveErrorCode::BadBoundary,
                             "past-horizon start requested but the inner boundary is not a past "
                             "horizon");
        return initial_slope(data, HorizonType::Past, cls.vanishing_slope);
    }
    if (bc.kind == BoundaryCondition::Kind::FutureHorizon) {
        if (cls.type != HorizonType::Future)
            throw SolveError(SolveErrorCode::BadBoundary,
                             "future-horizon start requested but the inner boundary is not a "
                             "future horizon");
        return initial_slope(data, HorizonType::Future, cls.vanishing_slope);
    }
    throw SolveError(SolveErrorCode::BadBoundary, "initial_slope: regular boundary has no series");
}

JangSolution solve(const InitialData& data, const BoundaryCondition& bc,
                   const SolverConfig& config) {
    JangSolution sol;
    sol.boundary = bc;
    const double scale = data.mass_scale();
    double r_max = config.r_max > 0.0 ? config.r_max : 1e4 * scale;
    r_max = std::min(r_max, data.r_max());
    sol.grid = RadialGrid::cosh_clustered(r_max, scale, config.nodes);
    const std::size_t n = sol.grid.size();
    sol.v.assign(n, 0.0);
    sol.v_r.assign(n, 0.0);
    sol.s.assign(n, 0.0);
    sol.phi.assign(n, 0.0);

    const Branch branch = pick_branch(bc, config.branch);
    sol.diag.branch_used = branch;
    const double clamp = config.clamp_margin;

    const bool horizon_start = bc.kind != BoundaryCondition::Kind::Alpha;
    double v0, slope0;
    if (horizon_start) {
        v0 = (bc.kind == BoundaryCondition::Kind::PastHorizon) ? 1.0 : -1.0;
        slope0 = initial_slope(data, bc);
    } else {
        if (!(std::abs(bc.alpha) < 1.0))
            throw ConfigError("solve: alpha boundary value must lie in (-1,1)");
        v0 = bc.alpha;
        slope0 = 0.0;  // provisional; replaced by the first RHS evaluation below
    }
    sol.diag.v0 = v0;

    const double r1 = sol.grid[1];
    double r_start, v_start;
    if (horizon_start) {
        // First-order series on [0, eps_s]; eps_s adaptive from a one-point
        // second-derivative estimate unless pinned by the config. Two bounds:
        // the value remainder |v''| eps^2 / 2 below abs_tol, and the slope
        // kink |v''| eps at the series/march junction well below the residual
        // gate (fine grids resolve the junction and the phi differencing sees
        // the kink amplified by 1/phi).
        double eps = config.series_cutoff;
        if (eps <= 0.0) {
            const double probe = std::max(r1, 1e-9 * scale);
            const double rhs_probe = rhs_from(load(data, probe), v0 + slope0 * probe, branch);
            const double curv = std::max(std::abs(rhs_probe - slope0) / probe, 1e-12);
            eps = std::min(std::sqrt(2.0 * config.abs_tol / curv),
                           0.05 * config.residual_gate / curv);
            eps = std::clamp(eps, 1e-8 * r1, 0.05 * scale);
        }
        r_start = eps;
        v_start = v0 + slope0 * eps;
        sol.diag.eps_series = eps;
    } else {
        r_start = r1;
        double rhs1;
        try {
            rhs1 = rhs_from(load(data, r1), v0, branch);
        } catch (...) {
            rhs1 = 0.0;
        }
        if (!std::isfinite(rhs1)) rhs1 = 0.0;
        slope0 = rhs1;
        v_start = v0 + slope0 * r1;
    }
    sol.diag.slope0 = slope0;
    sol.v[0] = v0;
    sol.v_r[0] = slope0;

    // Arclength across [0, r_start]: Gauss with the sqrt substitution; v is
    // the first-order series in both cases.
    auto v_series = [&](double t) { return v0 + slope0 * t; };
    const double s_start = arc_segment_sqrt(data, 0.0, r_start, v_series);

    // Fill grid nodes inside the series region.
    std::size_t next_node = 1;
    while (next_node < n && sol.grid[next_node] <= r_start) {
        const double r = sol.grid[next_node];
        sol.v[next_node] = v_series(r);
        sol.s[next_node] = arc_segment_sqrt(data, 0.0, r, v_series);
        double vr = slope0;
        try {
            vr = rhs_from(load(data, r), sol.v[next_node], branch);
        } catch (const DomainError&) {
        }
        sol.v_r[next_node] = std::isfinite(vr) ? vr : slope0;
        ++next_node;
    }

    // Adaptive Dormand-Prince march, landing exactly on every output node.
    auto rhs_guarded = [&](double r, double v) {
        if (std::abs(v) >= 1.0 - clamp)
            throw DomainError("rhs: |v| reached the singular bound");
        return rhs_from(load(data, r), v, branch);
    };

    double r = r_start, v = v_start, s = s_start;
    double h = std::min(0.5 * (sol.grid[std::min(next_node, n - 1)] - r_start) + 1e-30,
                        1e-3 * scale);
    if (h <= 0.0) h = 1e-3 * scale;
    double k1 = 0.0;
    bool have_k1 = false;
    const double h_floor_rel = 1e-14;

    while (next_node < n) {
        const double target = sol.grid[next_node];
        bool hit_target = false;
        if (r + h >= target) {
            h = target - r;
            hit_target = true;
        }
        double err_ratio = 0.0;
        double v_new = v, s_new = s, k_last = 0.0;
        bool rejected = false;
        try {
            if (!have_k1) {
                k1 = rhs_guarded(r, v);
                have_k1 = true;
            }
            auto sdot = [&](double rr, double vv) {
                const double one_m_v2 = (1.0 - vv) * (1.0 + vv);
                return std::sqrt(data.g11(rr) / one_m_v2);
            };
            const double l1 = sdot(r, v);
            const double k2v = rhs_guarded(r + c2 * h, v + h * a21 * k1);
            const double v3 = v + h * (a31 * k1 + a32 * k2v);
            const double k3v = rhs_guarded(r + c3 * h, v3);
            const double l3 = sdot(r + c3 * h, v3);
            const double v4 = v + h * (a41 * k1 + a42 * k2v + a43 * k3v);
            const double k4v = rhs_guarded(r + c4 * h, v4);
            const double l4 = sdot(r + c4 * h, v4);
            const double v5 = v + h * (a51 * k1 + a52 * k2v + a53 * k3v + a54 * k4v);
            const double k5v = rhs_guarded(r + c5 * h, v5);
            const double l5 = sdot(r + c5 * h, v5);
            const double v6 = v + h * (a61 * k1 + a62 * k2v + a63 * k3v + a64 * k4v + a65 * k5v);
            const double k6v = rhs_guarded(r + h, v6);
            const double l6 = sdot(r + h, v6);
            v_new = v + h * (b1 * k1 + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v);
            const double k7v = rhs_guarded(r + h, v_new);
            const double l7 = sdot(r + h, v_new);
            const double err_v =
                h * (e1 * k1 + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v + e7 * k7v);
            s_new = s + h * (b1 * l1 + b3 * l3 + b4 * l4 + b5 * l5 + b6 * l6);
            const double err_s = h * (e1 * l1 + e3 * l3 + e4 * l4 + e5 * l5 + e6 * l6 + e7 * l7);
            const double sc_v = config.abs_tol + config.rel_tol * std::abs(v);
            const double sc_s = config.abs_tol * std::max(1.0, s / scale) +
                                config.rel_tol * std::abs(s);
            err_ratio = std::max(std::abs(err_v) / sc_v, std::abs(err_s) / sc_s);
            k_last = k7v;
            if (std::abs(v_new) >= 1.0 - clamp)
                throw SolveError(SolveErrorCode::InteriorBlowup,
                                 "solve: |v| reached 1 at interior r (outermost-horizon condition violated)",
                                 r + h);
        } catch (const DomainError&) {
            rejected = true;
        }

        if (!rejected && err_ratio <= 1.0) {
            r = hit_target ? target : r + h;
            v = v_new;
            s = s_new;
            k1 = k_last;  // FSAL
            ++sol.diag.n_steps;
            if (hit_target) {
                sol.v[next_node] = v;
                sol.v_r[next_node] = k1;
                sol.s[next_node] = s;
                ++next_node;
            }
        } else {
            ++sol.diag.n_rejected;
        }

        double factor = rejected ? 0.25 : 0.9 * std::pow(std::max(err_ratio, 1e-10), -0.2);
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;
        const double floor = h_floor_rel * std::max(r, scale);
        if (h < floor) {
            if (std::abs(v) > 1.0 - 1e-6)
                throw SolveError(SolveErrorCode::InteriorBlowup,
                                 "solve: step underflow with |v| -> 1; interior horizon "
                                 "condition violated",
                                 r);
            throw SolveError(SolveErrorCode::StepUnderflow, "solve: step size underflow", r);
        }
    }

    for (std::size_t i = 0; i < n; ++i) sol.phi[i] = phi_of(data, sol.grid[i], sol.v[i]);
    if (horizon_start) sol.phi[0] = 0.0;

    // Interior a priori bound.
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(sol.v[i]) >= 1.0)
            throw SolveError(SolveErrorCode::InteriorBlowup, "solve: interior |v| >= 1",
                             sol.grid[i]);

    auto res = cross_form_residual(data, sol);
    sol.diag.cross_residual_sup = res.sup;
    sol.diag.cross_residual_l2 = res.l2;
    if (config.gate_enabled && res.sup > config.residual_gate)
        throw SolveError(SolveErrorCode::ResidualGate,
                         "solve: unreduced-form cross residual exceeds the acceptance gate (sup = " +
                             std::to_string(res.sup) + ")");

    auto asym = asymptotic_report(sol, 10.0 * config.abs_tol);
    sol.diag.zero_tail = asym.zero_tail;
    sol.diag.decay_exponent_v = asym.exponent_v;
    sol.diag.decay_exponent_vr = asym.exponent_vr;
    return sol;
}

ResidualNorms cross_form_residual(const InitialData& data, const JangSolution& sol) {
    const std::size_t n = sol.grid.size();
    ResidualNorms out;
    out.profile.assign(n, 0.0);
    // phi_r/phi reconstructed numerically from the gridded phi profile
    // (4th-order stencils in index space; the sqrt-clustered grid keeps the
    // profile smooth through a horizon start).
    auto phi_r = num::deriv_indexed4(sol.grid.nodes(), sol.phi);
    // Close to |v| = 1 the phi_r/phi term amplifies the solver's v floor like
    // 1/(1-v^2); inside this layer the pointwise residual is roundoff, not
    // equation information, so it is reported but kept out of the norms.
    const double singular_layer = 1e3 * std::sqrt(std::numeric_limits<double>::epsilon());
    std::vector<double> rs, vals;
    rs.reserve(n);
    vals.reserve(n);
    for (std::size_t i = 1; i < n; ++i) {
        if (!(sol.phi[i] > 0.0))
            throw DomainError("cross_form_residual: phi not positive at interior node");
        const double r = sol.grid[i];
        const double v = sol.v[i];
        const double sg = data.sqrt_g11_inv(r);
        const double one_m_v2 = (1.0 - v) * (1.0 + v);
        const double res = sg * sol.v_r[i] +
                           2.0 * (sg * data.rho_r(r) / data.rho(r) * v - data.kb(r)) +
                           (v * v - 1.0) * data.ka(r) +
                           sg * v * (phi_r[i] / sol.phi[i]) * one_m_v2;
        out.profile[i] = res;
        if (one_m_v2 < singular_layer) continue;
        rs.push_back(r);
        vals.push_back(res);
    }
    out.sup = num::sup_norm(vals);
    out.l2 = num::l2_norm(rs, vals);
    return out;
}

ArclengthProfile arclength_and_phi(const InitialData& data, const JangSolution& sol) {
    const std::size_t n = sol.grid.size();
    ArclengthProfile out;
    out.s.assign(n, 0.0);
    out.phi.assign(n, 0.0);
    const bool horizon_start = std::abs(sol.v[0]) >= 1.0 - 1e-12;
    if (horizon_start && sol.v_r[0] == 0.0)
        throw DomainError("arclength_and_phi: non-integrable start (v -> 1 slower than linearly)");
    // First cell: sqrt substitution through the (possible) 1/sqrt(r) start.
    out.s[1] = arc_segment_sqrt(data, 0.0, sol.grid[1],
                                [&](double t) { return sol.v[0] + sol.v_r[0] * t; });
    for (std::size_t i = 1; i + 1 < n; ++i)
        out.s[i + 1] = out.s[i] + arc_segment_hermite(data, sol.grid[i], sol.grid[i + 1],
                                                      sol.v[i], sol.v_r[i], sol.v[i + 1],
                                                      sol.v_r[i + 1]);
    for (std::size_t i = 0; i < n; ++i) out.phi[i] = phi_of(data, sol.grid[i], sol.v[i]);
    if (horizon_start) out.phi[0] = 0.0;
    return out;
}

double k44_profile(const InitialData& data, const JangSolution& sol, std::size_t i) {
    // phi * phi_r = (phi^2)_r / 2 stays finite through a horizon start, so
    // evaluate through phi^2 = (1 - v^2) rho_r^2 / g11.
    const double r = sol.grid[i];
    const double v = sol.v[i];
    if (v == 0.0) return 0.0;
    const double g = data.g11(r), gr = data.g11_r(r);
    if (!std::isfinite(g)) return 0.0;  // coordinate-degenerate horizon node
    const double pr = data.rho_r(r), prr = data.rho_rr(r);
    const double one_m_v2 = (1.0 - v) * (1.0 + v);
    const double phi2_r = -2.0 * v * sol.v_r[i] * pr * pr / g +
                          one_m_v2 * (2.0 * pr * prr / g - pr * pr * gr / (g * g));
    return 0.5 * phi2_r * v / std::sqrt(g);
}

std::optional<double> reconstruct_f_r(const InitialData& data, const JangSolution& sol,
                                      std::size_t i) {
    const double v = sol.v[i];
    if (std::abs(v) >= 1.0 - 1e-6) return std::nullopt;
    const double r = sol.grid[i];
    const double one_m_v2 = (1.0 - v) * (1.0 + v);
    return v * std::sqrt(data.g11(r)) / (sol.phi[i] * std::sqrt(one_m_v2));
}

AsymptoticReport asymptotic_report(const JangSolution& sol, double zero_tail_floor) {
    AsymptoticReport out;
    const double r_max = sol.grid.r_max();
    std::vector<double> rt, vt, vrt;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        if (sol.grid[i] < 0.1 * r_max) continue;
        rt.push_back(sol.grid[i]);
        vt.push_back(sol.v[i]);
        vrt.push_back(sol.v_r[i]);
        out.sup_r2_v = std::max(out.sup_r2_v, sol.grid[i] * sol.grid[i] * std::abs(sol.v[i]));
    }
    out.tail_points = rt.size();
    if (num::sup_norm(vt) <= zero_tail_floor) {
        out.zero_tail = true;
        return out;
    }
    if (auto fit = num::fit_decay_exponent(rt, vt)) out.exponent_v = fit->exponent;
    if (auto fit = num::fit_decay_exponent(rt, vrt)) out.exponent_vr = fit->exponent;
    return out;
}

}  // namespace jang
