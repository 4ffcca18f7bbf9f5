#pragma once

// Shared helpers for the unit and acceptance suites: deterministic random
// graph generation and small dense reference computations that stay
// independent of the production matvec code.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "redgm/graph.hpp"
#include "redgm/matrix.hpp"

namespace testsupport {

using redgm::DenseMatrix;
using redgm::DirectedGraph;
using redgm::NodeId;

struct GraphSpec {
    NodeId nodes = 30;
    double avg_out_degree = 4.0;
    double dangling_prob = 0.1;
    std::uint64_t seed = 1;
};

inline DirectedGraph make_random_graph(const GraphSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId j = 0; j < spec.nodes; ++j) {
        if (unit(rng) < spec.dangling_prob) continue;
        const int degree = 1 + static_cast<int>(unit(rng) * 2.0 * spec.avg_out_degree);
        for (int e = 0; e < degree; ++e) {
            NodeId t = static_cast<NodeId>(rng() % spec.nodes);
            if (t != j) edges.emplace_back(j, t);
        }
    }
    // Guarantee at least one edge so the graph is never empty.
    if (edges.empty()) edges.emplace_back(0, spec.nodes > 1 ? 1 : 0);
    return DirectedGraph(spec.nodes, std::move(edges));
}

/// Distinct members drawn uniformly, in draw order.
inline std::vector<NodeId> pick_subset(NodeId n, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<bool> used(n, false);
    std::vector<NodeId> members;
    while (members.size() < count) {
        NodeId candidate = static_cast<NodeId>(rng() % n);
        if (!used[candidate]) {
            used[candidate] = true;
            members.push_back(candidate);
        }
    }
    return members;
}

/// Graph whose scattering block (for subset {0,1,2}) has its leading
/// eigenvalue above 0.99: the article block is strongly connected and never
/// links back to the subset, so mass leaves it only through teleportation.
inline DirectedGraph make_slow_scattering_graph() {
    const NodeId n = 120;
    std::mt19937_64 rng(7);
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.emplace_back(0, 1);
    edges.emplace_back(1, 2);
    edges.emplace_back(2, 0);
    for (NodeId j = 0; j < 3; ++j)
        for (int e = 0; e < 4; ++e) edges.emplace_back(j, 3 + static_cast<NodeId>(rng() % (n - 3)));
    for (NodeId j = 3; j < n; ++j) {
        edges.emplace_back(j, 3 + (j - 3 + 1) % (n - 3));  // ring keeps it strongly connected
        for (int e = 0; e < 5; ++e) edges.emplace_back(j, 3 + static_cast<NodeId>(rng() % (n - 3)));
    }
    return DirectedGraph(n, std::move(edges));
}

/// Dense transition matrix S built directly from the definition; test-local
/// reference for the sparse matvec.
inline DenseMatrix dense_transition(const DirectedGraph& g) {
    const std::size_t n = g.node_count();
    DenseMatrix s(n, n, 0.0);
    for (NodeId j = 0; j < n; ++j) {
        const NodeId deg = g.out_degree(j);
        if (deg == 0) {
            for (std::size_t i = 0; i < n; ++i) s(i, j) = 1.0 / static_cast<double>(n);
        } else {
            for (NodeId t : g.out_neighbors(j)) s(t, j) = 1.0 / static_cast<double>(deg);
        }
    }
    return s;
}

inline std::vector<double> dense_matvec(const DenseMatrix& m, const std::vector<double>& v) {
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
    return out;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline double l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

/// Random square matrix with entries in (0, 1); diag_value overrides the
/// diagonal when non-negative.
inline DenseMatrix make_random_matrix(std::size_t n, std::uint64_t seed,
                                      double diag_value = -1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(1e-6, 1.0);
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = (i == j && diag_value >= 0.0) ? diag_value : unit(rng);
    return m;
}

inline std::filesystem::path fixture_dir() {
#ifdef REDGM_FIXTURE_DIR
    return REDGM_FIXTURE_DIR;
#else
    return "tests/fixtures";
#endif
}

} // namespace testsupport
