#include "redgm/google.hpp"

#include <cmath>
#include <stdexcept>

namespace redgm {

void apply_transition(const DirectedGraph& g, std::span<const double> in,
                      std::span<double> out) {
    const std::size_t n = g.node_count();
    if (in.size() != n || out.size() != n)
        throw std::invalid_argument("transition matvec dimension mismatch");

    double dangling_sum = 0.0;
    for (NodeId j : g.dangling_nodes()) dangling_sum += in[j];
    const double base = dangling_sum / static_cast<double>(n);
    std::fill(out.begin(), out.end(), base);

    for (NodeId j = 0; j < n; ++j) {
        const NodeId deg = g.out_degree(j);
        if (deg == 0) continue;
        const double w = in[j] / static_cast<double>(deg);
        for (NodeId t : g.out_neighbors(j)) out[t] += w;
    }
}

std::vector<double> apply_transition(const DirectedGraph& g, std::span<const double> in) {
    std::vector<double> out(g.node_count());
    apply_transition(g, in, out);
    return out;
}

GoogleOperator::GoogleOperator(const DirectedGraph& g, double alpha)
    : graph_(&g), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("damping factor must lie in (0, 1)");
}

void GoogleOperator::apply(std::span<const double> in, std::span<double> out) const {
    const std::size_t n = size();
    if (in.size() != n || out.size() != n)
        throw std::invalid_argument("google matvec dimension mismatch");
    double total = 0.0;
    for (double v : in) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite entry in input vector");
        total += v;
    }
    apply_transition(*graph_, in, out);
    const double teleport = (1.0 - alpha_) * total / static_cast<double>(n);
    for (double& v : out) v = alpha_ * v + teleport;
}

std::vector<double> GoogleOperator::apply(std::span<const double> in) const {
    std::vector<double> out(size());
    apply(in, out);
    return out;
}

} // namespace redgm
