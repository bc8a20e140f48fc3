#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace jang::num {

// Derivatives of a sampled profile f(x) on a smoothly graded, strictly
// increasing grid. Differencing is done in index space (d f/d i divided by
// d x/d i), which stays second order on stretched grids and handles
// sqrt-clustered nodes where f is smooth in the grid parameter but not in x.
// Interior points use central stencils, endpoints one-sided ones of the same
// order.
std::vector<double> deriv_indexed(std::span<const double> x, std::span<const double> f);
std::vector<double> second_deriv_indexed(std::span<const double> x, std::span<const double> f);

// Fourth-order variant (5-point stencils), used where the truncation error of
// the 2nd-order stencil would eat a tolerance budget. Falls back to the
// 2nd-order formulas when fewer than 5 points are available.
std::vector<double> deriv_indexed4(std::span<const double> x, std::span<const double> f);

double sup_norm(std::span<const double> v);
// Discrete L2 norm weighted by cell widths: sqrt( sum f_i^2 w_i / sum w_i ).
double l2_norm(std::span<const double> x, std::span<const double> f);

// Trapezoidal cumulative integral of f against x; out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f);

// Gauss-Legendre nodes/weights on [-1,1], n in {2..8}.
std::span<const double> gauss_nodes(int n);
std::span<const double> gauss_weights(int n);

// Roots of a*x^2 + b*x + c = 0 in a numerically stable form.
struct QuadraticRoots {
    int count = 0;
    double x1 = 0.0, x2 = 0.0;  // x1 <= x2 when count == 2
};
QuadraticRoots solve_quadratic(double a, double b, double c);

// Bisection for a sign change of f on [lo, hi]; rel_tol is relative to the
// bracket magnitude. Requires f(lo)*f(hi) <= 0.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol = 1e-12, int max_iter = 200);

// Least-squares slope of log|f| against log x over the given samples,
// ignoring entries with |f| <= floor_abs. Returns nullopt if fewer than 4
// usable points remain. The fitted decay exponent of f ~ x^-p is -slope.
struct PowerFit {
    double exponent = 0.0;   // p in f ~ C * x^{-p}
    double log_amplitude = 0.0;
    std::size_t points = 0;
};
std::optional<PowerFit> fit_decay_exponent(std::span<const double> x, std::span<const double> f,
                                           double floor_abs = 0.0);

// Least-squares fit of f(x) = sum_{k=0..order} a_k x^{-k}; returns the a_k.
// Used for Richardson-style extrapolation of tail profiles to x -> infinity.
std::vector<double> fit_inverse_powers(std::span<const double> x, std::span<const double> f,
                                       int order);

// Convergence order from three residual levels measured at grid spacings
// h, h/2, h/4: log2 of the mean reduction factor.
double convergence_order(double res_h, double res_h2, double res_h4);

}  // namespace jang::num
