#pragma once

#include <cstdint>
#include <vector>

#include "redgm/google.hpp"
#include "redgm/graph.hpp"

namespace redgm {

enum class RankKind { pagerank, cheirank };

/// Stationary probability vector of a Google operator (or an empirical
/// estimate of one). Entries are non-negative and sum to one.
struct RankVector {
    std::vector<double> probabilities;
    RankKind kind = RankKind::pagerank;
    std::int64_t iterations_used = 0;
    /// L1 change of the last power iteration (0 for empirical estimates).
    double final_residual = 0.0;
};

/// Power iteration from the uniform vector until the L1 difference of
/// successive iterates drops to tol. Since ||G x||_1 <= ||x||_1, the returned
/// vector satisfies ||G P - P||_1 <= tol. Throws ConvergenceError (carrying
/// the last iterate and residual) after max_iter non-converged sweeps.
RankVector pagerank(const GoogleOperator& op, double tol = 1e-12, std::int64_t max_iter = 1000);

/// PageRank of the link-reversed graph; ranks nodes by outgoing reach.
RankVector cheirank(const DirectedGraph& g, double alpha = 0.85, double tol = 1e-12,
                    std::int64_t max_iter = 1000);

/// Local ordering of subset members: entry i holds the 1-based rank of
/// subset member i, rank 1 = largest probability. Ties break by ascending
/// node id. Both index vectors are permutations of 1..N_r.
struct LocalIndices {
    std::vector<int> pagerank_index;  // K
    std::vector<int> cheirank_index;  // K*
};

LocalIndices local_indices(const RankVector& p, const RankVector& p_star,
                           const SubsetSelection& subset);

/// Subset positions m such that no other member beats m on both indices
/// strictly; sorted by ascending K. Depends only on index order, so it is
/// invariant under monotone re-scaling of the probabilities.
std::vector<int> nondominated_front(const LocalIndices& idx);

} // namespace redgm
