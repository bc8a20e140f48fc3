#include "jang/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace jang::num {

namespace {

// Central/one-sided first difference in index space, unit spacing.
inline double d1_central(double fm, double fp) { return 0.5 * (fp - fm); }
inline double d1_forward(double f0, double f1, double f2) { return -1.5 * f0 + 2.0 * f1 - 0.5 * f2; }

}  // namespace

std::vector<double> deriv_indexed(std::span<const double> x, std::span<const double> f) {
    const std::size_t n = x.size();
    if (n != f.size() || n < 3) throw std::invalid_argument("deriv_indexed: need >= 3 samples");
    std::vector<double> out(n);
    out[0] = d1_forward(f[0], f[1], f[2]) / d1_forward(x[0], x[1], x[2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = d1_central(f[i - 1], f[i + 1]) / d1_central(x[i - 1], x[i + 1]);
    out[n - 1] = d1_forward(f[n - 1], f[n - 2], f[n - 3]) / d1_forward(x[n - 1], x[n - 2], x[n - 3]);
    return out;
}

std::vector<double> second_deriv_indexed(std::span<const double> x, std::span<const double> f) {
    // Two applications of the first-derivative operator. Unlike the direct
    // (F'' x' - F' x'') / x'^3 stencil, the composition stays uniformly 2nd
    // order at a sqrt-clustered grid origin: the inner pass's truncation
    // error is locally constant there and drops out of the outer pass.
    const std::size_t n = x.size();
    if (n != f.size() || n < 4) throw std::invalid_argument("second_deriv_indexed: need >= 4 samples");
    return deriv_indexed(x, deriv_indexed(x, f));
}

std::vector<double> deriv_indexed4(std::span<const double> x, std::span<const double> f) {
    const std::size_t n = x.size();
    if (n < 7) return deriv_indexed(x, f);
    std::vector<double> out(n);
    auto d1c4 = [](double m2, double m1, double p1, double p2) {
        return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / 12.0;
    };
    // 4th-order one-sided stencils at offsets 0 and 1 from the boundary
    auto d1f4 = [](const double* g, int s) {
        return (-25.0 * g[0] + 48.0 * g[s] - 36.0 * g[2 * s] + 16.0 * g[3 * s] -
                3.0 * g[4 * s]) /
               12.0;
    };
    auto d1o4 = [](const double* g, int s) {
        return (-3.0 * g[-s] - 10.0 * g[0] + 18.0 * g[s] - 6.0 * g[2 * s] + g[3 * s]) / 12.0;
    };
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = d1c4(f[i - 2], f[i - 1], f[i + 1], f[i + 2]) /
                 d1c4(x[i - 2], x[i - 1], x[i + 1], x[i + 2]);
    out[0] = d1f4(&f[0], 1) / d1f4(&x[0], 1);
    out[1] = d1o4(&f[1], 1) / d1o4(&x[1], 1);
    out[n - 2] = d1o4(&f[n - 2], -1) / d1o4(&x[n - 2], -1);
    out[n - 1] = d1f4(&f[n - 1], -1) / d1f4(&x[n - 1], -1);
    return out;
}

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double l2_norm(std::span<const double> x, std::span<const double> f) {
    if (x.size() != f.size() || x.size() < 2) return 0.0;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double w;
        if (i == 0)
            w = 0.5 * (x[1] - x[0]);
        else if (i + 1 == x.size())
            w = 0.5 * (x[i] - x[i - 1]);
        else
            w = 0.5 * (x[i + 1] - x[i - 1]);
        num += f[i] * f[i] * w;
        den += w;
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return out;
}

namespace {
// Gauss-Legendre tables up to n=8.
const std::array<double, 2> gn2{-0.5773502691896257, 0.5773502691896257};
const std::array<double, 2> gw2{1.0, 1.0};
const std::array<double, 3> gn3{-0.7745966692414834, 0.0, 0.7745966692414834};
const std::array<double, 3> gw3{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
const std::array<double, 4> gn4{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
const std::array<double, 4> gw4{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                0.3478548451374538};
const std::array<double, 5> gn5{-0.9061798459386640, -0.5384693101056831, 0.0,
                                0.5384693101056831, 0.9061798459386640};
const std::array<double, 5> gw5{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                0.4786286704993665, 0.2369268850561891};
const std::array<double, 8> gn8{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
const std::array<double, 8> gw8{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};
}  // namespace

std::span<const double> gauss_nodes(int n) {
    switch (n) {
        case 2: return gn2;
        case 3: return gn3;
        case 4: return gn4;
        case 5: return gn5;
        case 8: return gn8;
        default: throw std::invalid_argument("gauss_nodes: unsupported n");
    }
}

std::span<const double> gauss_weights(int n) {
    switch (n) {
        case 2: return gw2;
        case 3: return gw3;
        case 4: return gw4;
        case 5: return gw5;
        case 8: return gw8;
        default: throw std::invalid_argument("gauss_weights: unsupported n");
    }
}

QuadraticRoots solve_quadratic(double a, double b, double c) {
    QuadraticRoots out;
    if (a == 0.0) {
        if (b == 0.0) return out;
        out.count = 1;
        out.x1 = out.x2 = -c / b;
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double r1 = q / a;
    double r2 = (q != 0.0) ? c / q : r1;
    if (disc == 0.0) {
        out.count = 1;
        out.x1 = out.x2 = r1;
        return out;
    }
    out.count = 2;
    out.x1 = std::min(r1, r2);
    out.x2 = std::max(r1, r2);
    return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
              int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::invalid_argument("bisect: no sign change on bracket");
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-30});
    for (int it = 0; it < max_iter && (hi - lo) > rel_tol * scale; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

std::optional<PowerFit> fit_decay_exponent(std::span<const double> x, std::span<const double> f,
                                           double floor_abs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double af = std::abs(f[i]);
        if (af <= floor_abs || x[i] <= 0.0) continue;
        const double lx = std::log(x[i]), ly = std::log(af);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 4) return std::nullopt;
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    const double slope = (m * sxy - sx * sy) / denom;
    PowerFit out;
    out.exponent = -slope;
    out.log_amplitude = (sy - slope * sx) / m;
    out.points = m;
    return out;
}

std::vector<double> fit_inverse_powers(std::span<const double> x, std::span<const double> f,
                                       int order) {
    const int k = order + 1;
    // Normal equations over the basis {1, 1/x, ..., 1/x^order}; x is rescaled
    // by its tail midpoint so the small system stays well conditioned.
    if (static_cast<int>(x.size()) < k) throw std::invalid_argument("fit_inverse_powers: too few points");
    double xref = 0.0;
    for (double xi : x) xref += xi;
    xref /= static_cast<double>(x.size());
    std::vector<double> A(k * k, 0.0), b(k, 0.0);
    std::vector<double> basis(k);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = xref / x[i];
        basis[0] = 1.0;
        for (int j = 1; j < k; ++j) basis[j] = basis[j - 1] * t;
        for (int p = 0; p < k; ++p) {
            b[p] += basis[p] * f[i];
            for (int q = 0; q < k; ++q) A[p * k + q] += basis[p] * basis[q];
        }
    }
    // Gaussian elimination with partial pivoting.
    std::vector<int> piv(k);
    for (int i = 0; i < k; ++i) piv[i] = i;
    for (int col = 0; col < k; ++col) {
        int best = col;
        for (int row = col + 1; row < k; ++row)
            if (std::abs(A[row * k + col]) > std::abs(A[best * k + col])) best = row;
        if (best != col) {
            for (int q = 0; q < k; ++q) std::swap(A[col * k + q], A[best * k + q]);
            std::swap(b[col], b[best]);
        }
        const double d = A[col * k + col];
        if (d == 0.0) throw std::runtime_error("fit_inverse_powers: singular normal equations");
        for (int row = col + 1; row < k; ++row) {
            const double m = A[row * k + col] / d;
            for (int q = col; q < k; ++q) A[row * k + q] -= m * A[col * k + q];
            b[row] -= m * b[col];
        }
    }
    std::vector<double> a(k);
    for (int row = k - 1; row >= 0; --row) {
        double s = b[row];
        for (int q = row + 1; q < k; ++q) s -= A[row * k + q] * a[q];
        a[row] = s / A[row * k + row];
    }
    // Undo the rescaling: coefficient of x^{-j} is a[j] * xref^j.
    double scale = 1.0;
    for (int j = 1; j < k; ++j) {
        scale *= xref;
        a[j] *= scale;
    }
    return a;
}

double convergence_order(double res_h, double res_h2, double res_h4) {
    const double r1 = res_h / std::max(res_h2, 1e-300);
    const double r2 = res_h2 / std::max(res_h4, 1e-300);
    return 0.5 * (std::log2(std::max(r1, 1e-300)) + std::log2(std::max(r2, 1e-300)));
}

}  // namespace jang::num
