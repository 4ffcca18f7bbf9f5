#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "redgm/graph.hpp"
#include "redgm/matrix.hpp"
#include "redgm/rank.hpp"

namespace redgm::oracle {

// Small-scale reference implementations, deliberately kept on a separate
// code path from the production operators: dense algebra goes through Eigen,
// the production modules never do. Everything here is single-threaded and
// capped in size.

/// Explicit N x N Google matrix; every column sums to one. Throws when N
/// exceeds the cap.
DenseMatrix dense_google(const DirectedGraph& g, double alpha, std::size_t cap = 500);

/// Direct evaluation of the reduced matrix G_rr + G_rs (1 - G_ss)^(-1) G_sr
/// by LU factorization with partial pivoting. subset entries are global node
/// ids in the canonical order.
DenseMatrix dense_reduced(const DenseMatrix& g_full, std::span<const NodeId> subset);

/// Same with the inverse replaced by the truncated raw series
/// sum_{l=0..l_max} G_ss^l; converges slowly when G_ss has an eigenvalue
/// near one.
DenseMatrix dense_series_reduced(const DenseMatrix& g_full, std::span<const NodeId> subset,
                                 std::int64_t l_max);

/// Number of raw-series terms until || G_ss^l v ||_1 <= series_tol times the
/// accumulated sum norm, maximized over the columns v of G_sr. Counts terms
/// the same way the deflated path does, so the two are directly comparable.
std::int64_t raw_series_terms_needed(const DenseMatrix& g_full, std::span<const NodeId> subset,
                                     double series_tol, std::int64_t l_max);

/// Empirical PageRank from one long random walk: with probability alpha
/// follow a uniform outlink (uniform over all nodes from a dangling node),
/// otherwise jump uniformly. Deterministic for a fixed seed across
/// platforms; visit frequencies sum to one.
RankVector random_surfer(const DirectedGraph& g, double alpha, std::int64_t steps,
                         std::uint64_t seed);

/// Dominant eigenvector (largest |eigenvalue|), sign-fixed and normalized to
/// sum one.
std::vector<double> dense_dominant_eigenvector(const DenseMatrix& m);

struct DenseEigentriple {
    double lambda = 0.0;
    std::vector<double> right;  // sum = 1
    std::vector<double> left;   // left . right = 1
};

/// Leading eigentriple via a dense eigensolver, normalized like the
/// production deflation data.
DenseEigentriple dense_leading_eigentriple(const DenseMatrix& m);

} // namespace redgm::oracle
