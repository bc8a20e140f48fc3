#include "jang/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jang/errors.hpp"
#include "jang/interp.hpp"
#include "jang/numerics.hpp"

namespace jang {

namespace {

double param(const Params& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

// Static Schwarzschild slice in the area-radius gauge: the internal
// coordinate is rho itself, g11 = (1 - 2M/rho)^{-1}, k = 0. g11 diverges at
// the horizon sphere; IEEE infinities propagate consistently through the
// theta/phi/m limits there.
struct SchwarzschildStatic final : InitialData::Model {
    double M, lo, hi;
    SchwarzschildStatic(double M_, double hi_) : M(M_), lo(2.0 * M_), hi(hi_) {}
    double f(double p) const { return 1.0 - 2.0 * M / p; }
    double g11(double p) const override { return 1.0 / f(p); }
    double g11_r(double p) const override {
        const double fp = 2.0 * M / (p * p);
        return -fp / (f(p) * f(p));
    }
    double g11_rr(double p) const override {
        const double fv = f(p);
        const double fp = 2.0 * M / (p * p), fpp = -4.0 * M / (p * p * p);
        return (2.0 * fp * fp - fv * fpp) / (fv * fv * fv);
    }
    double rho(double p) const override { return p; }
    double rho_r(double) const override { return 1.0; }
    double rho_rr(double) const override { return 0.0; }
    double ka(double) const override { return 0.0; }
    double ka_r(double) const override { return 0.0; }
    double kb(double) const override { return 0.0; }
    double kb_r(double) const override { return 0.0; }
    double r_min() const override { return lo; }
    double r_max() const override { return hi; }
    bool analytic() const override { return true; }
    std::string name() const override { return "schwarzschild-static"; }
};

// Painleve-Gullstrand slice: flat spatial metric in the area radius,
// ka = -1/2 sqrt(2M/rho^3), kb = +sqrt(2M/rho^3). The collapsing sign makes
// the inner boundary a past horizon: theta_-(2M) = 0.
struct PainleveGullstrand final : InitialData::Model {
    double M, lo, hi;
    PainleveGullstrand(double M_, double lo_, double hi_) : M(M_), lo(lo_), hi(hi_) {}
    double g11(double) const override { return 1.0; }
    double g11_r(double) const override { return 0.0; }
    double g11_rr(double) const override { return 0.0; }
    double rho(double p) const override { return p; }
    double rho_r(double) const override { return 1.0; }
    double rho_rr(double) const override { return 0.0; }
    double kb(double p) const override { return std::sqrt(2.0 * M) * std::pow(p, -1.5); }
    double kb_r(double p) const override {
        return -1.5 * std::sqrt(2.0 * M) * std::pow(p, -2.5);
    }
    double ka(double p) const override { return -0.5 * kb(p); }
    double ka_r(double p) const override { return -0.5 * kb_r(p); }
    double r_min() const override { return lo; }
    double r_max() const override { return hi; }
    bool analytic() const override { return true; }
    std::string name() const override { return "painleve-gullstrand"; }
};

// Conformally flat time-symmetric data g = u^4 * delta in isotropic radius x,
// u = 1 + M/(2x) + eps (1+x^2)^{-1/2}.
struct BumpedConformal final : InitialData::Model {
    double M, eps, xlo, xhi;
    BumpedConformal(double M_, double eps_, double xlo_, double xhi_)
        : M(M_), eps(eps_), xlo(xlo_), xhi(xhi_) {}
    double u(double x) const { return 1.0 + 0.5 * M / x + eps / std::sqrt(1.0 + x * x); }
    double u1(double x) const {
        return -0.5 * M / (x * x) - eps * x * std::pow(1.0 + x * x, -1.5);
    }
    double u2(double x) const {
        return M / (x * x * x) + eps * (2.0 * x * x - 1.0) * std::pow(1.0 + x * x, -2.5);
    }
    double g11(double x) const override {
        const double uu = u(x);
        return uu * uu * uu * uu;
    }
    double g11_r(double x) const override {
        const double uu = u(x);
        return 4.0 * uu * uu * uu * u1(x);
    }
    double g11_rr(double x) const override {
        const double uu = u(x), up = u1(x);
        return 12.0 * uu * uu * up * up + 4.0 * uu * uu * uu * u2(x);
    }
    double rho(double x) const override {
        const double uu = u(x);
        return x * uu * uu;
    }
    double rho_r(double x) const override {
        const double uu = u(x);
        return uu * (uu + 2.0 * x * u1(x));
    }
    double rho_rr(double x) const override {
        const double uu = u(x), up = u1(x);
        return 4.0 * uu * up + 2.0 * x * up * up + 2.0 * x * uu * u2(x);
    }
    double ka(double) const override { return 0.0; }
    double ka_r(double) const override { return 0.0; }
    double kb(double) const override { return 0.0; }
    double kb_r(double) const override { return 0.0; }
    double r_min() const override { return xlo; }
    double r_max() const override { return xhi; }
    bool analytic() const override { return true; }
    std::string name() const override { return "bumped-conformal"; }
};

struct FlatData final : InitialData::Model {
    double rho0, rmax;
    FlatData(double rho0_, double rmax_) : rho0(rho0_), rmax(rmax_) {}
    double g11(double) const override { return 1.0; }
    double g11_r(double) const override { return 0.0; }
    double g11_rr(double) const override { return 0.0; }
    double rho(double r) const override { return rho0 + r; }
    double rho_r(double) const override { return 1.0; }
    double rho_rr(double) const override { return 0.0; }
    double ka(double) const override { return 0.0; }
    double ka_r(double) const override { return 0.0; }
    double kb(double) const override { return 0.0; }
    double kb_r(double) const override { return 0.0; }
    double r_max() const override { return rmax; }
    bool analytic() const override { return true; }
    std::string name() const override { return "flat"; }
};

struct SampledModel final : InitialData::Model {
    MonotoneCubic ig11, irho, ika, ikb;
    double lo, hi;
    SampledModel(std::span<const double> r, std::span<const double> g11v,
                 std::span<const double> rhov, std::span<const double> kav,
                 std::span<const double> kbv)
        : ig11(r, g11v), irho(r, rhov), ika(r, kav), ikb(r, kbv), lo(r.front()), hi(r.back()) {}
    double g11(double r) const override { return ig11(r); }
    double g11_r(double r) const override { return ig11.deriv(r); }
    double g11_rr(double r) const override { return ig11.second_deriv(r); }
    double rho(double r) const override { return irho(r); }
    double rho_r(double r) const override { return irho.deriv(r); }
    double rho_rr(double r) const override { return irho.second_deriv(r); }
    double ka(double r) const override { return ika(r); }
    double ka_r(double r) const override { return ika.deriv(r); }
    double kb(double r) const override { return ikb(r); }
    double kb_r(double r) const override { return ikb.deriv(r); }
    double r_min() const override { return lo; }
    double r_max() const override { return hi; }
    bool analytic() const override { return false; }
    std::string name() const override { return "sampled"; }
};

// Shift the coordinate so r = 0 sits at `off` of the wrapped data.
struct ShiftedData final : InitialData::Model {
    InitialData base;
    double off;
    ShiftedData(InitialData b, double o) : base(std::move(b)), off(o) {}
    double g11(double r) const override { return base.g11(r + off); }
    double g11_r(double r) const override { return base.g11_r(r + off); }
    double g11_rr(double r) const override { return base.g11_rr(r + off); }
    double rho(double r) const override { return base.rho(r + off); }
    double rho_r(double r) const override { return base.rho_r(r + off); }
    double rho_rr(double r) const override { return base.rho_rr(r + off); }
    double ka(double r) const override { return base.ka(r + off); }
    double ka_r(double r) const override { return base.ka_r(r + off); }
    double kb(double r) const override { return base.kb(r + off); }
    double kb_r(double r) const override { return base.kb_r(r + off); }
    double r_max() const override { return base.r_max() - off; }
    bool analytic() const override { return base.analytic(); }
    std::string name() const override { return base.name(); }
};

std::shared_ptr<const InitialData::Model> make_family(const std::string& family,
                                                      const Params& params) {
    const double M = param(params, "M", 1.0);
    if (family == "flat") {
        const double rho0 = param(params, "rho0", 1.0);
        if (!(rho0 > 0.0)) throw ConfigError("flat family: rho0 must be positive");
        const double rmax = param(params, "rmax", 2e4 * std::max(rho0, 1.0));
        return std::make_shared<FlatData>(rho0, rmax);
    }
    if (!(M > 0.0)) throw ConfigError("family '" + family + "': mass must be positive");
    const double rmax = param(params, "rmax", 2e4 * M);
    if (family == "schwarzschild-static")
        return std::make_shared<SchwarzschildStatic>(M, 2.0 * M + rmax);
    if (family == "painleve-gullstrand")
        // Domain dips inside the horizon so the theta_- root is an interior
        // sign change for the generic search.
        return std::make_shared<PainleveGullstrand>(M, M, 2.0 * M + rmax);
    if (family == "bumped-conformal") {
        const double eps = param(params, "eps", 0.0);
        return std::make_shared<BumpedConformal>(M, eps, 0.125 * M, 2.0 * M + rmax);
    }
    throw ConfigError("unknown builtin family '" + family + "'");
}

}  // namespace

InitialData::InitialData(std::shared_ptr<const Model> m, double truncation_offset)
    : model_(std::move(m)), truncation_offset_(truncation_offset) {
    name_ = model_->name();
    const double rho_in = model_->rho(model_->r_min());
    mass_scale_ = (std::isfinite(rho_in) && rho_in > 0.0) ? 0.5 * rho_in : 1.0;
}

double InitialData::check(double r) const {
    if (!model_) throw DomainError("initial data: empty handle");
    const double lo = model_->r_min(), hi = model_->r_max();
    if (r < lo - 1e-12 * (hi - lo) || r > hi * (1.0 + 1e-12))
        throw DomainError("initial data: evaluation outside domain");
    return r;
}

InitialData build_builtin_untruncated(const std::string& family, const Params& params) {
    return InitialData(make_family(family, params));
}

InitialData build_builtin(const std::string& family, const Params& params) {
    InitialData raw = build_builtin_untruncated(family, params);
    if (family == "flat") return raw;
    HorizonSearch h = find_outermost_horizon(raw);
    if (!h.found) throw ConfigError("family '" + family + "': no apparent horizon found");
    if (h.outer_violation)
        throw ConfigError("family '" + family + "': horizon condition violated outside r=" +
                          std::to_string(h.r_horizon));
    return truncate_at_horizon(raw, h.r_horizon);
}

InitialData load_sampled(std::span<const double> r, std::span<const double> g11,
                         std::span<const double> rho, std::span<const double> ka,
                         std::span<const double> kb) {
    const std::size_t n = r.size();
    if (g11.size() != n || rho.size() != n || ka.size() != n || kb.size() != n)
        throw ConfigError("load_sampled: sample arrays must have equal length");
    if (n < 16) throw ConfigError("load_sampled: need at least 16 samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(r[i] > r[i - 1])) throw ConfigError("load_sampled: r not strictly increasing");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(g11[i] > 0.0) || !std::isfinite(g11[i]))
            throw ConfigError("load_sampled: g11 must be positive and finite");
        if (!(rho[i] > 0.0)) throw ConfigError("load_sampled: rho must be positive");
    }
    return InitialData(std::make_shared<SampledModel>(r, g11, rho, ka, kb));
}

InitialData resample(const InitialData& data, std::span<const double> nodes) {
    std::vector<double> g11(nodes.size()), rho(nodes.size()), ka(nodes.size()), kb(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        g11[i] = data.g11(nodes[i]);
        rho[i] = data.rho(nodes[i]);
        ka[i] = data.ka(nodes[i]);
        kb[i] = data.kb(nodes[i]);
    }
    return load_sampled(nodes, g11, rho, ka, kb);
}

NullExpansions null_expansions(const InitialData& data, double r) {
    const double h = data.sqrt_g11_inv(r) * data.rho_r(r) / data.rho(r);
    const double kb = data.kb(r);
    return {2.0 * (h + kb), 2.0 * (h - kb)};
}

double null_expansion_slope(const InitialData& data, double r, int kb_sign) {
    const double g = data.g11(r), gr = data.g11_r(r);
    const double p = data.rho(r), pr = data.rho_r(r), prr = data.rho_rr(r);
    const double sg = 1.0 / std::sqrt(g);
    const double dH = -0.5 * gr * sg / g * pr / p + sg * prr / p - sg * pr * pr / (p * p);
    return 2.0 * (dH + kb_sign * data.kb_r(r));
}

namespace {

double theta_scale(const InitialData& data) {
    // Representative magnitude of the expansions a little outside the inner
    // boundary; classification tolerances are relative to this.
    const double lo = data.r_min();
    const double span = data.r_max() - lo;
    double scale = 0.0;
    for (double frac : {0.01, 0.05, 0.2}) {
        const double r = lo + frac * std::min(span, 10.0 * data.mass_scale());
        auto th = null_expansions(data, r);
        if (std::isfinite(th.theta_plus)) scale = std::max(scale, std::abs(th.theta_plus));
        if (std::isfinite(th.theta_minus)) scale = std::max(scale, std::abs(th.theta_minus));
    }
    return scale > 0.0 ? scale : 1.0;
}

}  // namespace

HorizonClassification classify_horizon(const InitialData& data, double tau_rel) {
    HorizonClassification out;
    const double r0 = data.r_min();
    auto th = null_expansions(data, r0);
    out.theta_plus0 = th.theta_plus;
    out.theta_minus0 = th.theta_minus;
    out.tolerance_used = tau_rel * theta_scale(data);
    const bool plus0 = std::abs(th.theta_plus) <= out.tolerance_used;
    const bool minus0 = std::abs(th.theta_minus) <= out.tolerance_used;
    if (plus0 && minus0) {
        out.type = HorizonType::Both;
        out.vanishing_slope = std::min(null_expansion_slope(data, r0, +1),
                                       null_expansion_slope(data, r0, -1));
    } else if (minus0) {
        out.type = HorizonType::Past;
        out.vanishing_slope = null_expansion_slope(data, r0, -1);
    } else if (plus0) {
        out.type = HorizonType::Future;
        out.vanishing_slope = null_expansion_slope(data, r0, +1);
    } else {
        out.type = HorizonType::None;
    }
    return out;
}

HorizonSearch find_outermost_horizon(const InitialData& data, std::size_t scan_nodes) {
    HorizonSearch out;
    const double lo = data.r_min(), hi = data.r_max();
    const double tol = 1e-8 * theta_scale(data);

    // Scan nodes clustered toward the inner boundary but covering the domain.
    std::vector<double> probe(scan_nodes);
    const double lambda = std::acosh((hi - lo) / std::max(data.mass_scale(), 1e-6) + 1.0);
    for (std::size_t i = 0; i < scan_nodes; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(scan_nodes - 1);
        probe[i] = lo + (hi - lo) * (std::cosh(lambda * t) - 1.0) / (std::cosh(lambda) - 1.0);
    }

    // Scan theta_+ and theta_- separately: at a time-symmetric (minimal
    // sphere) horizon both vanish together and their product touches zero
    // without a sign change.
    auto theta = [&](double r, int sign) {
        auto th = null_expansions(data, r);
        const double val = sign > 0 ? th.theta_plus : th.theta_minus;
        return std::isfinite(val) ? val : 0.0;
    };

    double r_h = lo - 1.0;
    bool found = false;
    for (int sign : {+1, -1}) {
        double prev = theta(probe[0], sign);
        if (std::abs(prev) <= tol) {
            r_h = std::max(r_h, probe[0]);
            found = true;
        }
        for (std::size_t i = 1; i < scan_nodes; ++i) {
            const double cur = theta(probe[i], sign);
            if (prev * cur < 0.0) {
                const double root = num::bisect([&](double r) { return theta(r, sign); },
                                                probe[i - 1], probe[i], 1e-12);
                r_h = std::max(r_h, root);
                found = true;
            } else if (cur == 0.0 || std::abs(cur) <= tol) {
                // exact zero or a tolerance-level touch (double root)
                if (std::abs(cur) < std::abs(prev) || cur == 0.0) {
                    r_h = std::max(r_h, probe[i]);
                    found = true;
                }
            }
            prev = cur;
        }
    }
    if (!found) return out;

    out.found = true;
    out.r_horizon = r_h;
    // theta_pm must stay positive strictly outside the outermost root.
    const double guard = r_h + 1e-6 * (hi - r_h);
    for (double r : probe) {
        if (r <= guard) continue;
        auto th = null_expansions(data, r);
        if (th.theta_plus < -tol || th.theta_minus < -tol) {
            out.outer_violation = true;
            out.violation_r = r;
            break;
        }
    }
    return out;
}

InitialData truncate_at_horizon(const InitialData& data, double r_horizon) {
    if (r_horizon < data.r_min() - 1e-12 || r_horizon >= data.r_max())
        throw DomainError("truncate_at_horizon: horizon outside domain");
    if (r_horizon == 0.0 && data.r_min() == 0.0) return data;  // idempotent
    return InitialData(std::make_shared<ShiftedData>(data, r_horizon),
                       data.truncation_offset() + r_horizon);
}

double scalar_curvature_g(const InitialData& data, double r) {
    const double g = data.g11(r), gr = data.g11_r(r);
    const double p = data.rho(r), pr = data.rho_r(r), prr = data.rho_rr(r);
    return 2.0 / (p * p) * (1.0 - pr * pr / g) - 4.0 * prr / (g * p) +
           2.0 * gr * pr / (g * g * p);
}

EnergyMomentum energy_momentum(const InitialData& data, double r) {
    EnergyMomentum out;
    const double R = scalar_curvature_g(data, r);
    const double ka = data.ka(r), kb = data.kb(r);
    const double tr = ka + 2.0 * kb;
    out.mu = (R - (ka * ka + 2.0 * kb * kb) + tr * tr) / (16.0 * M_PI);
    out.J1 = ((data.rho_r(r) / data.rho(r)) * (ka - kb) - data.kb_r(r)) / (4.0 * M_PI);
    out.J_norm = data.sqrt_g11_inv(r) * std::abs(out.J1);
    return out;
}

DecReport check_dec(const InitialData& data, const RadialGrid& grid, double tau_abs) {
    DecReport out;
    out.tolerance = tau_abs;
    out.min_margin = std::numeric_limits<double>::infinity();
    // Node 0 can sit on a coordinate-degenerate horizon sphere (g11 = inf in
    // the static gauge); constraint densities start at the first interior node.
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double r = grid[i];
        auto em = energy_momentum(data, r);
        const double margin = em.mu - em.J_norm;
        if (margin < out.min_margin) {
            out.min_margin = margin;
            out.worst_r = r;
        }
    }
    out.pass = out.min_margin >= -tau_abs;
    return out;
}

FalloffReport check_falloff(const InitialData& data) {
    const double rmax = data.r_max();
    if (rmax < 1e3 * data.mass_scale())
        throw DomainError("check_falloff: insufficient tail (need r_max >= 1e3 * mass scale)");
    const std::size_t n = 64;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = 0.1 * rmax * std::pow(10.0, static_cast<double>(i) / (n - 1));

    struct Q {
        std::string name;
        double required;
        std::vector<double> val;
    };
    std::vector<Q> qs = {{"|k|_g <= C r^-2", 2.0, {}},
                         {"|Tr k| <= C r^-3", 3.0, {}},
                         {"|g11-1| + r|g11_r| <= C r^-1", 1.0, {}},
                         {"|rho-r| + r|rho_r-1| + r^2|rho_rr| <= C", 0.0, {}}};
    double scale = 0.0;
    for (double ri : r) {
        const double ka = data.ka(ri), kb = data.kb(ri);
        qs[0].val.push_back(std::sqrt(ka * ka + 2.0 * kb * kb));
        qs[1].val.push_back(std::abs(ka + 2.0 * kb));
        qs[2].val.push_back(std::abs(data.g11(ri) - 1.0) + ri * std::abs(data.g11_r(ri)));
        qs[3].val.push_back(std::abs(data.rho(ri) - ri) + ri * std::abs(data.rho_r(ri) - 1.0) +
                            ri * ri * std::abs(data.rho_rr(ri)));
        scale = std::max({scale, std::abs(data.g11(ri)), 1.0});
    }

    FalloffReport out;
    out.pass = true;
    for (auto& q : qs) {
        FalloffClause c;
        c.name = q.name;
        c.required_exponent = q.required;
        const double floor_abs = 1e-13 * scale;
        if (num::sup_norm(q.val) <= floor_abs) {
            c.trivially_zero = true;
            c.pass = true;
            c.fitted_exponent = std::numeric_limits<double>::infinity();
        } else {
            auto fit = num::fit_decay_exponent(r, q.val, floor_abs);
            if (fit) {
                c.fitted_exponent = fit->exponent;
                c.pass = fit->exponent >= q.required - 0.1;
            } else {
                c.pass = false;
            }
        }
        out.pass = out.pass && c.pass;
        out.clauses.push_back(std::move(c));
    }
    return out;
}

}  // namespace jang
