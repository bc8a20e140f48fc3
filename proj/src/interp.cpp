#include "jang/interp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "jang/errors.hpp"

namespace jang {

namespace {

// Derivative of the Lagrange interpolant through nodes x[w0..w0+m) at x[i],
// written in difference form (sum_j L_j' = 0, so subtracting f[i] is exact):
// the raw weight sum cancels catastrophically on strongly graded grids.
double lagrange_deriv_at_node(std::span<const double> x, std::span<const double> f,
                              std::size_t w0, std::size_t m, std::size_t i) {
    double out = 0.0;
    for (std::size_t j = w0; j < w0 + m; ++j) {
        if (j == i) continue;
        double num = 1.0, den = 1.0;
        for (std::size_t k = w0; k < w0 + m; ++k) {
            if (k == j) continue;
            if (k != i) num *= (x[i] - x[k]);
            den *= (x[j] - x[k]);
        }
        out += (f[j] - f[i]) * num / den;
    }
    return out;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::span<const double> x, std::span<const double> f)
    : x_(x.begin(), x.end()), f_(f.begin(), f.end()) {
    const std::size_t n = x_.size();
    if (n != f_.size()) throw ConfigError("interpolant: node/value length mismatch");
    if (n < 4) throw ConfigError("interpolant: need at least 4 samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw ConfigError("interpolant: abscissae not strictly increasing");

    d_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t w0, m;
        if (n >= 5 && i >= 2 && i + 2 < n) {
            w0 = i - 2;
            m = 5;
        } else if (i == 0 || i == 1) {
            w0 = 0;
            m = std::min<std::size_t>(4, n);
        } else {
            m = std::min<std::size_t>(4, n);
            w0 = n - m;
        }
        d_[i] = lagrange_deriv_at_node(x_, f_, w0, m, i);
    }

    // Monotonicity limiter against local secants.
    std::vector<double> sec(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) sec[i] = (f_[i + 1] - f_[i]) / (x_[i + 1] - x_[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const double dl = (i > 0) ? sec[i - 1] : sec[0];
        const double dr = (i + 1 < n) ? sec[i] : sec[n - 2];
        double lim;
        if (dl * dr > 0.0) {
            const double s = (dl > 0.0) ? 1.0 : -1.0;
            lim = (s * d_[i] <= 0.0) ? 0.0 : s * std::min(s * d_[i], 3.0 * std::min(s * dl, s * dr));
        } else if (i > 0 && i + 1 < n) {
            lim = 0.0;  // interior data extremum
        } else {
            const double s = (dr != 0.0) ? ((dr > 0.0) ? 1.0 : -1.0) : 0.0;
            lim = (s == 0.0 || s * d_[i] <= 0.0) ? 0.0 : s * std::min(s * d_[i], 3.0 * s * dr);
        }
        if (lim != d_[i]) limiter_touched_ = true;
        d_[i] = lim;
    }
}

std::size_t MonotoneCubic::cell(double x) const {
    const double lo = x_.front(), hi = x_.back();
    const double slack = 1e-12 * (hi - lo);
    if (x < lo - slack || x > hi + slack)
        throw DomainError("interpolant: evaluation outside sampled range");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

// All evaluators keep the node values inside a difference (f[i+1] - f[i]) so
// nothing cancels catastrophically on cells much smaller than |f|.
double MonotoneCubic::eval(double x) const {
    const std::size_t i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return f_[i] + (f_[i + 1] - f_[i]) * (3 * t2 - 2 * t3) +
           h * (d_[i] * (t3 - 2 * t2 + t) + d_[i + 1] * (t3 - t2));
}

double MonotoneCubic::deriv(double x) const {
    const std::size_t i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return (f_[i + 1] - f_[i]) * (6 * t - 6 * t2) / h + d_[i] * (3 * t2 - 4 * t + 1) +
           d_[i + 1] * (3 * t2 - 2 * t);
}

double MonotoneCubic::second_deriv(double x) const {
    const std::size_t i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    return (f_[i + 1] - f_[i]) * (6 - 12 * t) / (h * h) +
           (d_[i] * (6 * t - 4) + d_[i + 1] * (6 * t - 2)) / h;
}

}  // namespace jang
