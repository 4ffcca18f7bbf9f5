#pragma once

#include <span>
#include <utility>
#include <vector>

#include "redgm/matrix.hpp"

namespace redgm {

enum class InteractionMode { friends, followers };
enum class EdgeLevel { seed, derived };

/// Ranked matrix entries: (local index, value), strongest first. Only
/// strictly positive off-diagonal entries qualify — a node is never its own
/// friend, and negative hidden-link entries are never selected — so the list
/// may be shorter than k. Ties break by ascending tie_rank (the local
/// PageRank index when supplied, the local index otherwise).
std::vector<std::pair<int, double>> top_friends(const DenseMatrix& m, int j, int k,
                                                std::span<const int> tie_rank = {});

/// Same over row j: the nodes at the origin of the strongest links into j.
/// Equals top_friends on the transposed matrix.
std::vector<std::pair<int, double>> top_followers(const DenseMatrix& m, int j, int k,
                                                  std::span<const int> tie_rank = {});

struct InteractionEdge {
    int from = 0;
    int to = 0;
    EdgeLevel level = EdgeLevel::seed;
};

/// Directed friend/follower graph over subset nodes. Every node is reachable
/// from a seed, each expanded node contributes at most k edges, and re-running
/// the closure on the result adds nothing.
struct InteractionGraph {
    std::vector<int> nodes;  // ascending local index
    std::vector<InteractionEdge> edges;
    InteractionMode mode = InteractionMode::friends;
    int k = 0;
};

/// Expands each seed with its top-k list (seed edges), then recursively
/// expands every newly reached node (derived edges) until a pass adds no
/// edge. Friend edges point node -> friend; follower edges point
/// follower -> node. Expansion order within a pass is ascending tie_rank.
InteractionGraph build_interaction_graph(const DenseMatrix& m, std::span<const int> seeds,
                                         int k, InteractionMode mode,
                                         std::span<const int> tie_rank = {});

struct ConsensusEntry {
    int member = 0;
    int count = 0;
};

/// Members present in at least m of the given lists, with their counts,
/// ordered by descending count then ascending member. m must not exceed the
/// number of lists.
std::vector<ConsensusEntry> cross_source_consensus(const std::vector<std::vector<int>>& lists,
                                                   int m);

} // namespace redgm
