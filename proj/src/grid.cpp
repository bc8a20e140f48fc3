#include "jang/grid.hpp"

#include <cmath>

#include "jang/errors.hpp"

namespace jang {

RadialGrid RadialGrid::cosh_clustered(double r_max, double r_scale, std::size_t n_nodes) {
    if (!(r_max > 0.0) || !(r_scale > 0.0)) throw ConfigError("grid: r_max and r_scale must be positive");
    if (n_nodes < 16) throw ConfigError("grid: need at least 16 nodes");
    RadialGrid g;
    const double lambda = std::acosh(r_max / r_scale + 1.0);
    g.nodes_.resize(n_nodes);
    const std::size_t n = n_nodes - 1;
    for (std::size_t i = 0; i <= n; ++i) {
        const double tau = static_cast<double>(i) / static_cast<double>(n);
        g.nodes_[i] = r_scale * (std::cosh(lambda * tau) - 1.0);
    }
    g.nodes_[0] = 0.0;
    g.nodes_[n] = r_max;
    g.descriptor_ = "cosh(lambda=" + std::to_string(lambda) + ",scale=" + std::to_string(r_scale) +
                    "): sqrt clustering at r=0, log spacing toward r_max";
    return g;
}

RadialGrid RadialGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 16) throw ConfigError("grid: need at least 16 nodes");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw ConfigError("grid: nodes not strictly increasing");
    RadialGrid g;
    g.nodes_ = std::move(nodes);
    g.descriptor_ = "external";
    return g;
}

}  // namespace jang
