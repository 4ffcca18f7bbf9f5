#include "redgm/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "redgm/errors.hpp"

namespace redgm {

namespace {

double l1_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

BlockPartition::BlockPartition(const GoogleOperator& op, const SubsetSelection& subset)
    : op_(op), subset_(subset) {
    const DirectedGraph& g = op.graph();
    const NodeId n = g.node_count();
    if (subset_.size() >= n)
        throw std::invalid_argument("subset leaves no scattering space");

    in_subset_.assign(n, 0);
    local_index_.assign(n, 0);
    for (std::size_t r = 0; r < subset_.size(); ++r) {
        in_subset_[subset_.member(r)] = 1;
        local_index_[subset_.member(r)] = static_cast<std::uint32_t>(r);
    }
    s_nodes_.reserve(n - subset_.size());
    for (NodeId v = 0; v < n; ++v) {
        if (!in_subset_[v]) {
            local_index_[v] = static_cast<std::uint32_t>(s_nodes_.size());
            s_nodes_.push_back(v);
        }
    }

    // Materialize G_rr column by column: teleport everywhere, uniform for
    // dangling members, alpha/k_out on direct links inside the subset.
    const double alpha = op_.alpha();
    const std::size_t n_r = subset_.size();
    g_rr_ = DenseMatrix(n_r, n_r);
    for (std::size_t j = 0; j < n_r; ++j) {
        const NodeId src = subset_.member(j);
        const double base =
            (1.0 - alpha) / n + (g.is_dangling(src) ? alpha / n : 0.0);
        for (std::size_t i = 0; i < n_r; ++i) g_rr_(i, j) = base;
        const NodeId deg = g.out_degree(src);
        if (deg == 0) continue;
        const double w = alpha / static_cast<double>(deg);
        for (NodeId t : g.out_neighbors(src))
            if (in_subset_[t]) g_rr_(local_index_[t], j) += w;
    }
}

void BlockPartition::multiply_ss(std::span<const double> s_in, std::span<double> s_out) const {
    const DirectedGraph& g = op_.graph();
    const double n = static_cast<double>(g.node_count());
    const double alpha = op_.alpha();
    if (s_in.size() != s_nodes_.size() || s_out.size() != s_nodes_.size())
        throw std::invalid_argument("scattering matvec dimension mismatch");

    double total = 0.0, dangling = 0.0;
    for (std::size_t a = 0; a < s_nodes_.size(); ++a) {
        total += s_in[a];
        if (g.is_dangling(s_nodes_[a])) dangling += s_in[a];
    }
    const double base = alpha * dangling / n + (1.0 - alpha) * total / n;
    std::fill(s_out.begin(), s_out.end(), base);

    for (std::size_t a = 0; a < s_nodes_.size(); ++a) {
        const NodeId src = s_nodes_[a];
        const NodeId deg = g.out_degree(src);
        if (deg == 0) continue;
        const double w = alpha * s_in[a] / static_cast<double>(deg);
        for (NodeId t : g.out_neighbors(src))
            if (!in_subset_[t]) s_out[local_index_[t]] += w;
    }
}

void BlockPartition::multiply_ss_transpose(std::span<const double> s_in,
                                           std::span<double> s_out) const {
    const DirectedGraph& g = op_.graph();
    const double n = static_cast<double>(g.node_count());
    const double alpha = op_.alpha();
    if (s_in.size() != s_nodes_.size() || s_out.size() != s_nodes_.size())
        throw std::invalid_argument("scattering matvec dimension mismatch");

    double total = 0.0;
    for (double x : s_in) total += x;
    const double teleport = (1.0 - alpha) * total / n;

    for (std::size_t a = 0; a < s_nodes_.size(); ++a) {
        const NodeId src = s_nodes_[a];
        const NodeId deg = g.out_degree(src);
        if (deg == 0) {
            s_out[a] = alpha * total / n + teleport;
            continue;
        }
        double acc = 0.0;
        for (NodeId t : g.out_neighbors(src))
            if (!in_subset_[t]) acc += s_in[local_index_[t]];
        s_out[a] = alpha * acc / static_cast<double>(deg) + teleport;
    }
}

void BlockPartition::multiply_sr(std::span<const double> r_in, std::span<double> s_out) const {
    const DirectedGraph& g = op_.graph();
    const double n = static_cast<double>(g.node_count());
    const double alpha = op_.alpha();
    if (r_in.size() != subset_.size() || s_out.size() != s_nodes_.size())
        throw std::invalid_argument("block matvec dimension mismatch");

    double total = 0.0, dangling = 0.0;
    for (std::size_t j = 0; j < subset_.size(); ++j) {
        total += r_in[j];
        if (g.is_dangling(subset_.member(j))) dangling += r_in[j];
    }
    const double base = alpha * dangling / n + (1.0 - alpha) * total / n;
    std::fill(s_out.begin(), s_out.end(), base);

    for (std::size_t j = 0; j < subset_.size(); ++j) {
        const NodeId src = subset_.member(j);
        const NodeId deg = g.out_degree(src);
        if (deg == 0) continue;
        const double w = alpha * r_in[j] / static_cast<double>(deg);
        for (NodeId t : g.out_neighbors(src))
            if (!in_subset_[t]) s_out[local_index_[t]] += w;
    }
}

void BlockPartition::multiply_rs(std::span<const double> s_in, std::span<double> r_out) const {
    const DirectedGraph& g = op_.graph();
    const double n = static_cast<double>(g.node_count());
    const double alpha = op_.alpha();
    if (s_in.size() != s_nodes_.size() || r_out.size() != subset_.size())
        throw std::invalid_argument("block matvec dimension mismatch");

    double total = 0.0, dangling = 0.0;
    for (std::size_t a = 0; a < s_nodes_.size(); ++a) {
        total += s_in[a];
        if (g.is_dangling(s_nodes_[a])) dangling += s_in[a];
    }
    const double base = alpha * dangling / n + (1.0 - alpha) * total / n;
    std::fill(r_out.begin(), r_out.end(), base);

    for (std::size_t a = 0; a < s_nodes_.size(); ++a) {
        const NodeId src = s_nodes_[a];
        const NodeId deg = g.out_degree(src);
        if (deg == 0) continue;
        const double w = alpha * s_in[a] / static_cast<double>(deg);
        for (NodeId t : g.out_neighbors(src))
            if (in_subset_[t]) r_out[local_index_[t]] += w;
    }
}

void BlockPartition::multiply_sr_transpose(std::span<const double> s_in,
                                           std::span<double> r_out) const {
    const DirectedGraph& g = op_.graph();
    const double n = static_cast<double>(g.node_count());
    const double alpha = op_.alpha();
    if (s_in.size() != s_nodes_.size() || r_out.size() != subset_.size())
        throw std::invalid_argument("block matvec dimension mismatch");

    double total = 0.0;
    for (double x : s_in) total += x;
    const double teleport = (1.0 - alpha) * total / n;

    for (std::size_t j = 0; j < subset_.size(); ++j) {
        const NodeId src = subset_.member(j);
        const NodeId deg = g.out_degree(src);
        if (deg == 0) {
            r_out[j] = alpha * total / n + teleport;
            continue;
        }
        double acc = 0.0;
        for (NodeId t : g.out_neighbors(src))
            if (!in_subset_[t]) acc += s_in[local_index_[t]];
        r_out[j] = alpha * acc / static_cast<double>(deg) + teleport;
    }
}

namespace {

struct PowerResult {
    std::vector<double> vec;  // L1-normalized, non-negative
    double growth = 0.0;      // asymptotic per-step L1 ratio
    std::int64_t iterations = 0;
};

PowerResult power_leading(const MatVec& apply, std::size_t n, double tol,
                          std::int64_t max_iter, const char* what) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> w(n);
    double growth = 0.0;
    double diff = 0.0;
    for (std::int64_t it = 1; it <= max_iter; ++it) {
        apply(v, w);
        double s = 0.0;
        for (double x : w) s += x;
        if (!(s > 0.0))
            throw ConvergenceError(std::string(what) + ": operator annihilated the iterate", 0.0,
                                   it, std::move(v));
        growth = s;  // sum(v) == 1 each step, so the ratio is just sum(w)
        for (double& x : w) x /= s;
        diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff += std::abs(w[i] - v[i]);
        v.swap(w);
        if (diff <= tol) return PowerResult{std::move(v), growth, it};
    }
    throw ConvergenceError(std::string(what) + " power iteration did not converge (last diff " +
                               std::to_string(diff) + ")",
                           diff, max_iter, std::move(v));
}

} // namespace

DeflationData leading_eigentriple(const MatVec& apply, const MatVec& apply_transpose,
                                  std::size_t n, double tol, std::int64_t max_iter) {
    PowerResult right = power_leading(apply, n, tol, max_iter, "right eigenvector");
    PowerResult left = power_leading(apply_transpose, n, tol, max_iter, "left eigenvector");

    // Eq. (9) needs a one-dimensional leading eigenspace; disagreeing growth
    // ratios signal a degenerate or complex leading eigenvalue.
    if (std::abs(right.growth - left.growth) > 1e-8)
        throw ConvergenceError("left/right leading eigenvalue estimates disagree (" +
                                   std::to_string(right.growth) + " vs " +
                                   std::to_string(left.growth) + "); leading eigenspace "
                                   "is degenerate or complex",
                               std::abs(right.growth - left.growth),
                               right.iterations + left.iterations);

    DeflationData d;
    d.psi_right = std::move(right.vec);  // already sums to 1
    d.psi_left = std::move(left.vec);
    d.iterations_used = right.iterations + left.iterations;

    double overlap = dot(d.psi_left, d.psi_right);
    if (std::abs(overlap) < 1e-300)
        throw ConvergenceError("left and right eigenvectors are orthogonal; cannot "
                               "biorthonormalize",
                               0.0, d.iterations_used);
    for (double& x : d.psi_left) x /= overlap;

    // Rayleigh ratio with psi_L . psi_R = 1.
    std::vector<double> tmp(n);
    apply(d.psi_right, tmp);
    d.lambda_c = dot(d.psi_left, tmp);

    if (d.lambda_c >= 1.0 - 1e-14)
        throw ConvergenceError("leading eigenvalue of the scattering block is numerically 1; "
                               "the reduced matrix is singular",
                               d.lambda_c, d.iterations_used);
    if (d.lambda_c <= 0.0)
        throw ConvergenceError("leading eigenvalue is not positive", d.lambda_c,
                               d.iterations_used);

    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::abs(tmp[i] - d.lambda_c * d.psi_right[i]);
    d.residual_right = res;

    apply_transpose(d.psi_left, tmp);
    res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::abs(tmp[i] - d.lambda_c * d.psi_left[i]);
    d.residual_left = res;
    return d;
}

DeflationData leading_eigentriple(const BlockPartition& bp, double tol, std::int64_t max_iter) {
    auto apply = [&bp](std::span<const double> in, std::span<double> out) {
        bp.multiply_ss(in, out);
    };
    auto apply_t = [&bp](std::span<const double> in, std::span<double> out) {
        bp.multiply_ss_transpose(in, out);
    };
    return leading_eigentriple(MatVec(apply), MatVec(apply_t), bp.scattering_size(), tol,
                               max_iter);
}

DenseMatrix compute_gpr(const BlockPartition& bp, const DeflationData& defl) {
    const std::size_t n_r = bp.subset_size();
    const double denom = 1.0 - defl.lambda_c;
    if (denom <= 1e-14)
        throw ConvergenceError("1 - lambda_c vanished; projector component is singular",
                               defl.lambda_c, defl.iterations_used);

    std::vector<double> u(n_r), w(n_r);
    bp.multiply_rs(defl.psi_right, u);          // G_rs psi_R
    bp.multiply_sr_transpose(defl.psi_left, w); // (psi_L^T G_sr)^T
    for (double& x : u) x /= denom;

    DenseMatrix gpr(n_r, n_r);
    for (std::size_t i = 0; i < n_r; ++i)
        for (std::size_t j = 0; j < n_r; ++j) gpr(i, j) = u[i] * w[j];
    return gpr;
}

GqrResult compute_gqr(const BlockPartition& bp, const DeflationData& defl, double series_tol,
                      std::int64_t l_max) {
    if (!(series_tol > 0.0)) throw std::invalid_argument("series tolerance must be positive");
    if (l_max < 0) throw std::invalid_argument("l_max must be non-negative");

    const std::size_t n_r = bp.subset_size();
    const std::size_t n_s = bp.scattering_size();

    GqrResult result;
    result.matrix = DenseMatrix(n_r, n_r);

    std::vector<double> basis(n_r, 0.0);
    std::vector<double> term(n_s), tmp(n_s), acc(n_s), col(n_r);

    auto project_out = [&defl](std::span<double> v) {
        const double c = dot(defl.psi_left, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * defl.psi_right[i];
    };

    for (std::size_t j = 0; j < n_r; ++j) {
        basis[j] = 1.0;
        bp.multiply_sr(basis, term);  // column j of G_sr
        basis[j] = 0.0;

        project_out(term);  // l = 0 term: Q_c v
        acc = term;
        double acc_norm = l1_norm(acc);
        std::int64_t terms = 1;
        double term_norm = l1_norm(term);
        if (result.term_norms.empty()) result.term_norms.push_back(term_norm);
        else result.term_norms[0] = std::max(result.term_norms[0], term_norm);

        bool column_done = term_norm <= series_tol * std::max(acc_norm, 1e-30);
        for (std::int64_t l = 1; !column_done && l <= l_max; ++l) {
            // term <- Q_c (G_ss (Q_c term)); the pre-projection re-cleans
            // drift out of the deflated subspace.
            project_out(term);
            bp.multiply_ss(term, tmp);
            project_out(tmp);
            term.swap(tmp);

            term_norm = l1_norm(term);
            for (std::size_t i = 0; i < n_s; ++i) acc[i] += term[i];
            acc_norm = l1_norm(acc);
            ++terms;
            if (static_cast<std::size_t>(l) >= result.term_norms.size())
                result.term_norms.push_back(term_norm);
            else
                result.term_norms[l] = std::max(result.term_norms[l], term_norm);

            if (term_norm <= series_tol * std::max(acc_norm, 1e-30)) column_done = true;
        }
        if (!column_done) result.truncated = true;
        result.terms_used = std::max(result.terms_used, terms);
        result.last_term_norm = std::max(result.last_term_norm, term_norm);

        bp.multiply_rs(acc, col);  // G_rs applied to the summed column
        for (std::size_t i = 0; i < n_r; ++i) result.matrix(i, j) = col[i];
    }
    return result;
}

ReducedDecomposition assemble(const BlockPartition& bp, const DeflationData& defl,
                              const DenseMatrix& gpr, const GqrResult& gqr) {
    const std::size_t n_r = bp.subset_size();
    if (!gpr.same_shape(bp.direct_block()) || !gqr.matrix.same_shape(bp.direct_block()))
        throw std::invalid_argument("component shapes disagree");

    ReducedDecomposition d;
    d.g_rr = bp.direct_block();
    d.g_pr = gpr;
    d.g_qr = gqr.matrix;
    d.lambda_c = defl.lambda_c;
    d.series_terms_used = gqr.terms_used;
    d.series_truncated = gqr.truncated;

    d.g_r = DenseMatrix(n_r, n_r);
    d.g_qrd = DenseMatrix(n_r, n_r);
    d.g_qrnd = DenseMatrix(n_r, n_r);
    double negative_sum = 0.0;
    for (std::size_t i = 0; i < n_r; ++i) {
        for (std::size_t j = 0; j < n_r; ++j) {
            const double q = d.g_qr(i, j);
            d.g_r(i, j) = d.g_rr(i, j) + d.g_pr(i, j) + q;
            (i == j ? d.g_qrd(i, j) : d.g_qrnd(i, j)) = q;
            if (q < 0.0) negative_sum += -q;
        }
    }

    for (std::size_t j = 0; j < n_r; ++j) {
        const double colsum = d.g_r.column_sum(j);
        if (std::abs(colsum - 1.0) > 1e-8)
            throw ConsistencyError("column " + std::to_string(j) + " of the reduced matrix sums "
                                   "to " + std::to_string(colsum) +
                                   "; upstream iteration has not converged");
    }

    d.w_rr = d.g_rr.sum() / static_cast<double>(n_r);
    d.w_pr = d.g_pr.sum() / static_cast<double>(n_r);
    d.w_qr = d.g_qr.sum() / static_cast<double>(n_r);
    d.negative_weight = negative_sum / static_cast<double>(n_r);
    return d;
}

ReducedDecomposition compute_reduced(const GoogleOperator& op, const SubsetSelection& subset,
                                     const ReduceOptions& options) {
    BlockPartition bp(op, subset);
    DeflationData defl = leading_eigentriple(bp, options.deflation_tol,
                                             options.deflation_max_iter);
    DenseMatrix gpr = compute_gpr(bp, defl);
    GqrResult gqr = compute_gqr(bp, defl, options.series_tol, options.series_l_max);
    return assemble(bp, defl, gpr, gqr);
}

double reduced_pagerank_residual(const ReducedDecomposition& decomp, const RankVector& p_global,
                                 const SubsetSelection& subset) {
    const std::size_t n_r = subset.size();
    std::vector<double> p_r(n_r);
    for (std::size_t j = 0; j < n_r; ++j) p_r[j] = p_global.probabilities[subset.member(j)];

    double norm = l1_norm(p_r);
    if (norm == 0.0) return 0.0;

    double residual = 0.0;
    for (std::size_t i = 0; i < n_r; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n_r; ++j) row += decomp.g_r(i, j) * p_r[j];
        residual += std::abs(row - p_r[i]);
    }
    return residual / norm;
}

std::vector<double> gpr_pagerank_alignment(const ReducedDecomposition& decomp,
                                           const RankVector& p_global,
                                           const SubsetSelection& subset) {
    const std::size_t n_r = subset.size();
    std::vector<double> p_r(n_r);
    for (std::size_t j = 0; j < n_r; ++j) p_r[j] = p_global.probabilities[subset.member(j)];
    double p_norm = std::sqrt(dot(p_r, p_r));

    std::vector<double> cosines(n_r, 0.0);
    for (std::size_t j = 0; j < n_r; ++j) {
        double num = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n_r; ++i) {
            num += decomp.g_pr(i, j) * p_r[i];
            sq += decomp.g_pr(i, j) * decomp.g_pr(i, j);
        }
        double denom = std::sqrt(sq) * p_norm;
        cosines[j] = denom > 0.0 ? num / denom : 0.0;
    }
    return cosines;
}

} // namespace redgm
