#pragma once

#include <span>
#include <string>
#include <vector>

namespace jang {

// Radial grid on [0, r_max] with the horizon at node 0. The default
// construction is uniform in tau with r(tau) = r_scale*(cosh(lambda*tau)-1):
// square-root clustering near r=0 turning into logarithmic spacing toward
// r_max, with a C-infinity grading (stretched-grid finite differences stay
// uniformly second order).
class RadialGrid {
  public:
    static RadialGrid cosh_clustered(double r_max, double r_scale, std::size_t n_nodes);
    static RadialGrid from_nodes(std::vector<double> nodes);

    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    std::span<const double> nodes() const { return nodes_; }
    double r_max() const { return nodes_.back(); }
    const std::string& descriptor() const { return descriptor_; }

  private:
    std::vector<double> nodes_;
    std::string descriptor_;
};

}  // namespace jang
