#pragma once

#include <span>
#include <vector>

namespace jang {

// Shape-preserving cubic Hermite interpolant on a strictly increasing grid.
//
// Node slopes come from 5-point Lagrange differentiation (4-point / 3-point
// near the ends) and are then passed through a Fritsch-Carlson/Hyman style
// monotonicity limiter: wherever the data is locally monotone the slope is
// clamped to the [0, 3*min(|d-|,|d+|)] box, and at interior data extrema it
// is zeroed. On smooth monotone profiles the limiter never activates and the
// interpolant keeps the accuracy of the underlying slope estimates
// (values O(h^4), first derivatives O(h^3), second derivatives O(h^2)).
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::span<const double> x, std::span<const double> f);

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;
    double deriv(double x) const;
    double second_deriv(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    std::span<const double> nodes() const { return x_; }
    std::span<const double> node_slopes() const { return d_; }
    bool limiter_touched() const { return limiter_touched_; }

  private:
    std::size_t cell(double x) const;

    std::vector<double> x_, f_, d_;
    bool limiter_touched_ = false;
};

}  // namespace jang
