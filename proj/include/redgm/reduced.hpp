#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "redgm/google.hpp"
#include "redgm/graph.hpp"
#include "redgm/matrix.hpp"
#include "redgm/rank.hpp"

namespace redgm {

/// Block view of the full Google operator for a node subset:
///
///   G = | G_rr  G_rs |      r = the N_r subset nodes
///       | G_sr  G_ss |      s = the N_s = N - N_r scattering nodes
///
/// G_rr is materialized densely (it is N_r x N_r); the three blocks touching
/// the scattering space stay implicit and are exposed as matvecs. All blocks
/// partition the damped G, so each matvec carries the (1-alpha)/N teleport
/// term and the uniform dangling correction.
class BlockPartition {
public:
    BlockPartition(const GoogleOperator& op, const SubsetSelection& subset);

    std::size_t subset_size() const { return subset_.size(); }        // N_r
    std::size_t scattering_size() const { return s_nodes_.size(); }   // N_s
    const SubsetSelection& subset() const { return subset_; }
    double alpha() const { return op_.alpha(); }
    const GoogleOperator& op() const { return op_; }

    /// The dense direct block G_rr, rows/columns in subset member order.
    const DenseMatrix& direct_block() const { return g_rr_; }

    NodeId scattering_node(std::size_t local) const { return s_nodes_[local]; }

    // Block matvecs. Sizes: r-vectors have length N_r, s-vectors length N_s.
    void multiply_ss(std::span<const double> s_in, std::span<double> s_out) const;
    void multiply_ss_transpose(std::span<const double> s_in, std::span<double> s_out) const;
    void multiply_sr(std::span<const double> r_in, std::span<double> s_out) const;  // G_sr x
    void multiply_rs(std::span<const double> s_in, std::span<double> r_out) const;  // G_rs x
    void multiply_sr_transpose(std::span<const double> s_in, std::span<double> r_out) const;

private:
    GoogleOperator op_;
    SubsetSelection subset_;
    std::vector<NodeId> s_nodes_;           // s-local -> global
    std::vector<std::uint8_t> in_subset_;   // global -> r-space flag
    std::vector<std::uint32_t> local_index_; // global -> local index in its space
    DenseMatrix g_rr_;
};

/// Leading eigentriple (lambda_c, psi_R, psi_L) of the scattering block,
/// normalized so that sum(psi_R) = 1 and psi_L . psi_R = 1.
struct DeflationData {
    double lambda_c = 0.0;
    std::vector<double> psi_right;
    std::vector<double> psi_left;
    std::int64_t iterations_used = 0;
    double residual_right = 0.0;  // || G_ss psi_R - lambda_c psi_R ||_1
    double residual_left = 0.0;   // || G_ss^T psi_L - lambda_c psi_L ||_1
};

/// Power iteration on G_ss and its transpose. lambda_c is the Rayleigh ratio
/// psi_L . (G_ss psi_R) after biorthonormalization; the left/right growth
/// estimates must agree within 1e-8 or the eigenvalue is treated as
/// degenerate. Throws ConvergenceError on non-convergence, degeneracy, or
/// lambda_c >= 1 - 1e-14.
DeflationData leading_eigentriple(const BlockPartition& bp, double tol = 1e-12,
                                  std::int64_t max_iter = 200000);

/// Same solver over an arbitrary pair of matvec callbacks of dimension n.
/// The operator must be entrywise non-negative with a simple positive
/// leading eigenvalue.
using MatVec = std::function<void(std::span<const double>, std::span<double>)>;
DeflationData leading_eigentriple(const MatVec& apply, const MatVec& apply_transpose,
                                  std::size_t n, double tol = 1e-12,
                                  std::int64_t max_iter = 200000);

/// Rank-one projector component (G_rs psi_R)(psi_L^T G_sr) / (1 - lambda_c),
/// computed as two matvecs and an outer product. All entries non-negative.
DenseMatrix compute_gpr(const BlockPartition& bp, const DeflationData& defl);

struct GqrResult {
    DenseMatrix matrix;
    /// Number of series terms accumulated by the longest column (the l = 0
    /// projected term counts as 1).
    std::int64_t terms_used = 0;
    /// True when some column hit l_max before its term norm fell under the
    /// stopping threshold.
    bool truncated = false;
    /// L1 norm of the last accumulated term, maximized over columns.
    double last_term_norm = 0.0;
    /// Max-over-columns L1 norm of the term at each series index; the decay
    /// rate of this sequence is the observable convergence diagnostic.
    std::vector<double> term_norms;
};

/// Higher-order (hidden link) component: for each column v of G_sr, projects
/// v away from the leading eigenspace and sums Q_c (G_ss (Q_c v)) iterates
/// until the term's L1 norm falls below series_tol * ||accumulated||_1, then
/// maps back through G_rs. Hitting l_max is recorded as truncation, not an
/// error.
GqrResult compute_gqr(const BlockPartition& bp, const DeflationData& defl,
                      double series_tol = 1e-12, std::int64_t l_max = 10000);

/// The reduced matrix and its exact three-component split. Negative entries
/// of G_qr are kept as-is so that G_rr + G_pr + G_qr reproduces G_R exactly;
/// G_R itself is non-negative.
struct ReducedDecomposition {
    DenseMatrix g_r;      // G_R = G_rr + G_pr + G_qr
    DenseMatrix g_rr;     // direct links
    DenseMatrix g_pr;     // rank-one projector part
    DenseMatrix g_qr;     // hidden links (may contain negative entries)
    DenseMatrix g_qrd;    // diagonal of G_qr
    DenseMatrix g_qrnd;   // off-diagonal of G_qr
    double w_rr = 0.0, w_pr = 0.0, w_qr = 0.0;  // element sums / N_r; add to 1
    /// Summed magnitude of negative G_qr entries divided by N_r (diagnostic).
    double negative_weight = 0.0;
    double lambda_c = 0.0;
    std::int64_t series_terms_used = 0;
    bool series_truncated = false;
};

/// Sums the components, splits the diagonal, and computes the weights.
/// Throws ConsistencyError if any column sum of G_R strays from 1 by more
/// than 1e-8 (signals upstream convergence failure).
ReducedDecomposition assemble(const BlockPartition& bp, const DeflationData& defl,
                              const DenseMatrix& gpr, const GqrResult& gqr);

struct ReduceOptions {
    double deflation_tol = 1e-12;
    std::int64_t deflation_max_iter = 200000;
    double series_tol = 1e-12;
    std::int64_t series_l_max = 10000;
};

/// Full pipeline: partition, deflate, build both indirect components,
/// assemble.
ReducedDecomposition compute_reduced(const GoogleOperator& op, const SubsetSelection& subset,
                                     const ReduceOptions& options = {});

/// || G_R P_r - P_r ||_1 / || P_r ||_1 where P_r is the raw restriction of
/// the global PageRank to the subset. Scale-invariant in P_r; small iff the
/// global PageRank was converged and the decomposition is consistent.
double reduced_pagerank_residual(const ReducedDecomposition& decomp, const RankVector& p_global,
                                 const SubsetSelection& subset);

/// Cosine similarity between each column of G_pr and the restricted global
/// PageRank. Reported as a diagnostic; no threshold is asserted.
std::vector<double> gpr_pagerank_alignment(const ReducedDecomposition& decomp,
                                           const RankVector& p_global,
                                           const SubsetSelection& subset);

} // namespace redgm
