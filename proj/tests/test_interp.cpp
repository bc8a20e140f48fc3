#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "jang/errors.hpp"
#include "jang/interp.hpp"

using namespace jang;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
    return x;
}

double value_error(std::size_t n) {
    auto x = linspace(0.2, 3.0, n);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(-x[i]);  // smooth, monotone
    MonotoneCubic m(x, f);
    double worst = 0.0;
    for (int j = 0; j < 1200; ++j) {
        const double t = 0.2 + 2.8 * j / 1199.0;
        worst = std::max(worst, std::abs(m(t) - std::exp(-t)));
    }
    return worst;
}

double second_deriv_error(std::size_t n) {
    auto x = linspace(0.2, 3.0, n);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(-x[i]);
    MonotoneCubic m(x, f);
    double worst = 0.0;
    for (int j = 0; j < 1200; ++j) {
        const double t = 0.25 + 2.7 * j / 1199.0;
        worst = std::max(worst, std::abs(m.second_deriv(t) - std::exp(-t)));
    }
    return worst;
}

}  // namespace

TEST_CASE("nodes reproduce exactly") {
    auto x = linspace(0.0, 5.0, 24);
    std::vector<double> f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = 1.0 / (1.0 + x[i]);
    MonotoneCubic m(x, f);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(m(x[i]) == doctest::Approx(f[i]).epsilon(1e-15));
}

TEST_CASE("4th-order value accuracy on smooth monotone data") {
    const double e1 = value_error(40), e2 = value_error(80);
    CHECK(e1 / e2 > 11.0);  // ~2^4 with room for constant drift
}

TEST_CASE("2nd-order second derivatives on smooth monotone data") {
    const double e1 = second_deriv_error(60), e2 = second_deriv_error(120);
    CHECK(e1 / e2 > 3.0);
}

TEST_CASE("monotonicity preserved on random monotone data") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> jump(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 16 + trial;
        std::vector<double> x(n), f(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = i + 0.3 * jump(rng);
            // piecewise-flat-ish increasing data with abrupt jumps
            acc += (jump(rng) < 0.3) ? 0.0 : jump(rng) * jump(rng) * 5.0;
            f[i] = acc;
        }
        MonotoneCubic m(x, f);
        double prev = m(x.front());
        for (int j = 1; j <= 600; ++j) {
            const double t = x.front() + (x.back() - x.front()) * j / 600.0;
            const double cur = m(t);
            CHECK(cur >= prev - 1e-12 * (1.0 + std::abs(cur)));
            prev = cur;
        }
    }
}

TEST_CASE("limiter stays inactive on smooth strictly monotone data") {
    auto x = linspace(0.5, 4.0, 48);
    std::vector<double> f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::sqrt(x[i]);
    MonotoneCubic m(x, f);
    CHECK_FALSE(m.limiter_touched());
}

TEST_CASE("out-of-range evaluation throws") {
    auto x = linspace(0.0, 1.0, 16);
    MonotoneCubic m(x, x);
    CHECK_THROWS_AS(m(1.5), DomainError);
    CHECK_THROWS_AS(m(-0.5), DomainError);
}
