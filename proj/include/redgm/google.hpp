#pragma once

#include <span>
#include <vector>

#include "redgm/graph.hpp"

namespace redgm {

/// out = S * in, where S is the column-stochastic transition matrix of the
/// graph: S_ij = A_ij / k_out(j), with uniform 1/N columns for dangling j.
/// Preserves the entry sum of non-negative inputs. O(edges + N).
void apply_transition(const DirectedGraph& g, std::span<const double> in,
                      std::span<double> out);

std::vector<double> apply_transition(const DirectedGraph& g, std::span<const double> in);

/// Implicit Google operator G = alpha * S + (1 - alpha) * ones / N over an
/// immutable graph. Never materialized; every column of the implied matrix
/// sums to one.
class GoogleOperator {
public:
    GoogleOperator(const DirectedGraph& g, double alpha = 0.85);

    const DirectedGraph& graph() const { return *graph_; }
    double alpha() const { return alpha_; }
    NodeId size() const { return graph_->node_count(); }

    /// out = G * in, valid for arbitrary finite vectors:
    /// G v = alpha * S v + (1 - alpha) * (sum of v) / N * ones.
    void apply(std::span<const double> in, std::span<double> out) const;

    std::vector<double> apply(std::span<const double> in) const;

private:
    const DirectedGraph* graph_;
    double alpha_;
};

} // namespace redgm
