#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jang/grid.hpp"

namespace jang {

// Spherically symmetric initial data (M, g, k) with
//   g = g11(r) dr^2 + rho^2(r) dOmega^2,
//   k_ij = n_i n_j ka + (g_ij - n_i n_j) kb,   n = sqrt(g^11) d_r.
// Immutable after construction; value-semantics wrapper over a shared model.
class InitialData {
  public:
    struct Model {
        virtual ~Model() = default;
        virtual double g11(double r) const = 0;
        virtual double g11_r(double r) const = 0;
        virtual double g11_rr(double r) const = 0;
        virtual double rho(double r) const = 0;
        virtual double rho_r(double r) const = 0;
        virtual double rho_rr(double r) const = 0;
        virtual double ka(double r) const = 0;
        virtual double ka_r(double r) const = 0;
        virtual double kb(double r) const = 0;
        virtual double kb_r(double r) const = 0;
        virtual double r_min() const { return 0.0; }
        virtual double r_max() const = 0;
        virtual bool analytic() const = 0;
        virtual std::string name() const = 0;
    };

    InitialData() = default;
    explicit InitialData(std::shared_ptr<const Model> m, double truncation_offset = 0.0);

    double g11(double r) const { return model_->g11(check(r)); }
    double g11_r(double r) const { return model_->g11_r(check(r)); }
    double g11_rr(double r) const { return model_->g11_rr(check(r)); }
    double rho(double r) const { return model_->rho(check(r)); }
    double rho_r(double r) const { return model_->rho_r(check(r)); }
    double rho_rr(double r) const { return model_->rho_rr(check(r)); }
    double ka(double r) const { return model_->ka(check(r)); }
    double ka_r(double r) const { return model_->ka_r(check(r)); }
    double kb(double r) const { return model_->kb(check(r)); }
    double kb_r(double r) const { return model_->kb_r(check(r)); }

    double sqrt_g11_inv(double r) const { return 1.0 / std::sqrt(g11(r)); }

    double r_min() const { return model_->r_min(); }
    double r_max() const { return model_->r_max(); }
    bool analytic() const { return model_->analytic(); }
    const std::string& name() const { return name_; }
    // Half the inner-boundary area radius; the natural mass unit of the data.
    double mass_scale() const { return mass_scale_; }
    // Horizon location in the family's internal coordinate (0 if untruncated).
    double truncation_offset() const { return truncation_offset_; }

    bool valid() const { return static_cast<bool>(model_); }

  private:
    double check(double r) const;

    std::shared_ptr<const Model> model_;
    std::string name_;
    double mass_scale_ = 1.0;
    double truncation_offset_ = 0.0;
};

using Params = std::map<std::string, double>;

// Built-in families (closed forms, analytic derivatives). The domain is
// truncated so r=0 sits at the outermost apparent horizon where one exists.
//   "schwarzschild-static"  params M        (time symmetric slice)
//   "painleve-gullstrand"   params M        (flat slice, past horizon)
//   "bumped-conformal"      params M, eps   (time symmetric, u^4*flat)
//   "flat"                  params rho0     (vacuum, no horizon)
// Optional param "rmax" sets the outer cutoff (default 2e4 * mass scale).
InitialData build_builtin(const std::string& family, const Params& params = {});

// Same family closed forms on the untruncated internal domain; exercise
// find_outermost_horizon against these.
InitialData build_builtin_untruncated(const std::string& family, const Params& params = {});

// Sampled-grid data with monotone cubic interpolation; derivatives come from
// the interpolant. Arrays must have equal length >= 16, r strictly
// increasing, g11 > 0, rho > 0.
InitialData load_sampled(std::span<const double> r, std::span<const double> g11,
                         std::span<const double> rho, std::span<const double> ka,
                         std::span<const double> kb);

// Convenience: sample any data set onto a grid and rebuild it through the
// interpolation path.
InitialData resample(const InitialData& data, std::span<const double> nodes);

struct NullExpansions {
    double theta_plus;
    double theta_minus;
};
// theta_pm = 2( sqrt(g^11) rho_r / rho +- kb )
NullExpansions null_expansions(const InitialData& data, double r);

// d(theta_-+)/dr from the data derivatives (minus branch: sign = -1 on kb).
double null_expansion_slope(const InitialData& data, double r, int kb_sign);

enum class HorizonType { Past, Future, Both, None };

struct HorizonClassification {
    HorizonType type = HorizonType::None;
    double theta_plus0 = 0.0;
    double theta_minus0 = 0.0;
    // Slope at r=0 of the expansion that vanishes (theta_- for Past, theta_+
    // for Future, min of the two for Both); 0 for None.
    double vanishing_slope = 0.0;
    double tolerance_used = 0.0;
};
HorizonClassification classify_horizon(const InitialData& data, double tau_rel = 1e-8);

struct HorizonSearch {
    bool found = false;
    double r_horizon = 0.0;
    // theta_+ or theta_- drops below -tol somewhere outside the outermost
    // root: the data violate the outermost-horizon condition.
    bool outer_violation = false;
    double violation_r = 0.0;
};
// Largest root of theta_+ * theta_- on the data domain (sign scan plus
// bisection to 1e-12 relative).
HorizonSearch find_outermost_horizon(const InitialData& data, std::size_t scan_nodes = 4096);

// Reparametrize so r = 0 sits at r_horizon.
InitialData truncate_at_horizon(const InitialData& data, double r_horizon);

// Scalar curvature of g (closed form for the diagonal spherical metric,
// validated against a finite-difference oracle in the tests).
double scalar_curvature_g(const InitialData& data, double r);

struct EnergyMomentum {
    double mu = 0.0;      // local energy density
    double J1 = 0.0;      // covariant radial momentum density component
    double J_norm = 0.0;  // |J|_g = sqrt(g^11) |J1|
};
// Constraint densities: 16 pi mu = R - (ka^2 + 2 kb^2) + (ka + 2 kb)^2,
// 8 pi J1 = 2[ (rho_r/rho)(ka - kb) - kb_r ].
EnergyMomentum energy_momentum(const InitialData& data, double r);

struct DecReport {
    bool pass = false;
    double min_margin = 0.0;  // min over grid of (mu - |J|_g)
    double worst_r = 0.0;
    double tolerance = 0.0;
};
DecReport check_dec(const InitialData& data, const RadialGrid& grid, double tau_abs = 1e-10);

struct FalloffClause {
    std::string name;
    double fitted_exponent = 0.0;
    double required_exponent = 0.0;
    bool trivially_zero = false;
    bool pass = false;
};
struct FalloffReport {
    std::vector<FalloffClause> clauses;
    bool pass = false;  // all clauses
};
// Tail power-law fits of the asymptotic fall-off bounds over the outer decade.
// Requires the domain to reach 1e3 * mass scale.
FalloffReport check_falloff(const InitialData& data);

}  // namespace jang
