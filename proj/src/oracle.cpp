#include "redgm/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "redgm/errors.hpp"

namespace redgm::oracle {

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

DenseMatrix from_eigen(const Eigen::MatrixXd& e) {
    DenseMatrix m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

struct Blocks {
    Eigen::MatrixXd rr, rs, sr, ss;
    std::vector<NodeId> s_nodes;
};

Blocks split_blocks(const DenseMatrix& g_full, std::span<const NodeId> subset) {
    const std::size_t n = g_full.rows();
    if (g_full.rows() != g_full.cols()) throw std::invalid_argument("matrix must be square");
    std::vector<bool> in_subset(n, false);
    for (NodeId m : subset) {
        if (m >= n) throw std::invalid_argument("subset member out of range");
        if (in_subset[m]) throw std::invalid_argument("duplicate subset member");
        in_subset[m] = true;
    }
    Blocks b;
    for (NodeId v = 0; v < n; ++v)
        if (!in_subset[v]) b.s_nodes.push_back(v);
    const std::size_t n_r = subset.size();
    const std::size_t n_s = b.s_nodes.size();
    if (n_s == 0) throw std::invalid_argument("subset leaves no scattering space");

    b.rr.resize(n_r, n_r);
    b.rs.resize(n_r, n_s);
    b.sr.resize(n_s, n_r);
    b.ss.resize(n_s, n_s);
    for (std::size_t i = 0; i < n_r; ++i)
        for (std::size_t j = 0; j < n_r; ++j) b.rr(i, j) = g_full(subset[i], subset[j]);
    for (std::size_t i = 0; i < n_r; ++i)
        for (std::size_t j = 0; j < n_s; ++j) b.rs(i, j) = g_full(subset[i], b.s_nodes[j]);
    for (std::size_t i = 0; i < n_s; ++i)
        for (std::size_t j = 0; j < n_r; ++j) b.sr(i, j) = g_full(b.s_nodes[i], subset[j]);
    for (std::size_t i = 0; i < n_s; ++i)
        for (std::size_t j = 0; j < n_s; ++j) b.ss(i, j) = g_full(b.s_nodes[i], b.s_nodes[j]);
    return b;
}

// Deterministic uniform double in [0, 1) from the top 53 bits.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

DenseMatrix dense_google(const DirectedGraph& g, double alpha, std::size_t cap) {
    const std::size_t n = g.node_count();
    if (n > cap)
        throw std::invalid_argument("graph exceeds the dense oracle cap (" + std::to_string(n) +
                                    " > " + std::to_string(cap) + ")");
    const double teleport = (1.0 - alpha) / static_cast<double>(n);
    DenseMatrix m(n, n, teleport);
    for (NodeId j = 0; j < n; ++j) {
        const NodeId deg = g.out_degree(j);
        if (deg == 0) {
            for (std::size_t i = 0; i < n; ++i) m(i, j) += alpha / static_cast<double>(n);
            continue;
        }
        const double w = alpha / static_cast<double>(deg);
        for (NodeId t : g.out_neighbors(j)) m(t, j) += w;
    }
    return m;
}

DenseMatrix dense_reduced(const DenseMatrix& g_full, std::span<const NodeId> subset) {
    Blocks b = split_blocks(g_full, subset);
    const Eigen::MatrixXd lhs =
        Eigen::MatrixXd::Identity(b.ss.rows(), b.ss.cols()) - b.ss;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    Eigen::MatrixXd x = lu.solve(b.sr);
    const double residual = (lhs * x - b.sr).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-8)
        throw ConsistencyError("1 - G_ss is numerically singular (solve residual " +
                               std::to_string(residual) + ")");
    return from_eigen(b.rr + b.rs * x);
}

DenseMatrix dense_series_reduced(const DenseMatrix& g_full, std::span<const NodeId> subset,
                                 std::int64_t l_max) {
    Blocks b = split_blocks(g_full, subset);
    Eigen::MatrixXd term = b.sr;
    Eigen::MatrixXd acc = b.sr;
    for (std::int64_t l = 1; l <= l_max; ++l) {
        term = b.ss * term;
        acc += term;
    }
    return from_eigen(b.rr + b.rs * acc);
}

std::int64_t raw_series_terms_needed(const DenseMatrix& g_full, std::span<const NodeId> subset,
                                     double series_tol, std::int64_t l_max) {
    Blocks b = split_blocks(g_full, subset);
    std::int64_t worst = 0;
    for (Eigen::Index j = 0; j < b.sr.cols(); ++j) {
        Eigen::VectorXd term = b.sr.col(j);
        Eigen::VectorXd acc = term;
        std::int64_t terms = 1;
        while (term.lpNorm<1>() > series_tol * std::max(acc.lpNorm<1>(), 1e-30) &&
               terms <= l_max) {
            term = b.ss * term;
            acc += term;
            ++terms;
        }
        worst = std::max(worst, terms);
    }
    return worst;
}

RankVector random_surfer(const DirectedGraph& g, double alpha, std::int64_t steps,
                         std::uint64_t seed) {
    if (steps < 1) throw std::invalid_argument("steps must be at least 1");
    const std::size_t n = g.node_count();
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> visits(n, 0);

    NodeId position = static_cast<NodeId>(rng() % n);
    for (std::int64_t s = 0; s < steps; ++s) {
        if (next_unit(rng) < alpha) {
            const NodeId deg = g.out_degree(position);
            if (deg == 0) {
                position = static_cast<NodeId>(rng() % n);
            } else {
                auto neighbors = g.out_neighbors(position);
                position = neighbors[static_cast<std::size_t>(rng() % deg)];
            }
        } else {
            position = static_cast<NodeId>(rng() % n);
        }
        ++visits[position];
    }

    RankVector rank;
    rank.kind = RankKind::pagerank;
    rank.iterations_used = steps;
    rank.final_residual = 0.0;
    rank.probabilities.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        rank.probabilities[i] = static_cast<double>(visits[i]) / static_cast<double>(steps);
    return rank;
}

std::vector<double> dense_dominant_eigenvector(const DenseMatrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
    if (solver.info() != Eigen::Success) throw ConsistencyError("dense eigensolver failed");

    Eigen::Index which = 0;
    solver.eigenvalues().cwiseAbs().maxCoeff(&which);
    if (std::abs(solver.eigenvalues()(which).imag()) > 1e-9)
        throw ConsistencyError("dominant eigenvalue is complex");

    Eigen::VectorXd v = solver.eigenvectors().col(which).real();
    double total = v.sum();
    if (std::abs(total) < 1e-300) throw ConsistencyError("dominant eigenvector sums to zero");
    v /= total;
    return std::vector<double>(v.data(), v.data() + v.size());
}

DenseEigentriple dense_leading_eigentriple(const DenseMatrix& m) {
    DenseEigentriple t;
    t.right = dense_dominant_eigenvector(m);
    t.left = dense_dominant_eigenvector(m.transposed());

    Eigen::Map<const Eigen::VectorXd> r(t.right.data(), t.right.size());
    Eigen::Map<Eigen::VectorXd> l(t.left.data(), t.left.size());
    const double overlap = l.dot(r);
    if (std::abs(overlap) < 1e-300)
        throw ConsistencyError("left and right eigenvectors are orthogonal");
    l /= overlap;

    t.lambda = l.dot(to_eigen(m) * r);
    return t;
}

} // namespace redgm::oracle
