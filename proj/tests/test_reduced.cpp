#include <doctest.h>

#include <numeric>

#include "redgm/errors.hpp"
#include "redgm/io.hpp"
#include "redgm/oracle.hpp"
#include "redgm/rank.hpp"
#include "redgm/reduced.hpp"
#include "support.hpp"

using namespace redgm;
using namespace testsupport;

namespace {

// 3-cycle with subset {0, 1}: small enough to check against Eq.-level hand
// arithmetic.
DirectedGraph three_cycle() { return parse_edge_list("0 1\n1 2\n2 0"); }

std::span<const NodeId> members_of(const SubsetSelection& s) {
    return {s.members().data(), s.size()};
}

MatVec dense_op(const DenseMatrix& m, bool transpose) {
    return [&m, transpose](std::span<const double> in, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < in.size(); ++j)
                acc += (transpose ? m(j, i) : m(i, j)) * in[j];
            out[i] = acc;
        }
    };
}

// Scattering block extracted from the dense oracle matrix.
DenseMatrix dense_ss_block(const DenseMatrix& g_full, const SubsetSelection& subset) {
    std::vector<bool> in_subset(g_full.rows(), false);
    for (NodeId m : subset.members()) in_subset[m] = true;
    std::vector<std::size_t> s_nodes;
    for (std::size_t v = 0; v < g_full.rows(); ++v)
        if (!in_subset[v]) s_nodes.push_back(v);
    DenseMatrix ss(s_nodes.size(), s_nodes.size());
    for (std::size_t i = 0; i < s_nodes.size(); ++i)
        for (std::size_t j = 0; j < s_nodes.size(); ++j) ss(i, j) = g_full(s_nodes[i], s_nodes[j]);
    return ss;
}

} // namespace

TEST_CASE("partition materializes the direct block of the damped matrix") {
    DirectedGraph g = three_cycle();
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, {0, 1});
    BlockPartition bp(op, subset);

    const DenseMatrix& rr = bp.direct_block();
    CHECK(rr(0, 0) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(rr(0, 1) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(rr(1, 0) == doctest::Approx(0.90).epsilon(1e-14));
    CHECK(rr(1, 1) == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("subset member order fixes the block orientation") {
    DirectedGraph g = three_cycle();
    GoogleOperator op(g, 0.85);
    BlockPartition fwd(op, SubsetSelection(g, {0, 1}));
    BlockPartition swapped(op, SubsetSelection(g, {1, 0}));
    CHECK(fwd.direct_block()(1, 0) == swapped.direct_block()(0, 1));
    CHECK(fwd.direct_block()(0, 0) == swapped.direct_block()(1, 1));
}

TEST_CASE("block matvecs reassemble the dense matrix exactly") {
    DirectedGraph g = make_random_graph({.nodes = 30, .dangling_prob = 0.2, .seed = 42});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(30, 5, 42));
    BlockPartition bp(op, subset);
    DenseMatrix dense = oracle::dense_google(g, 0.85);

    const std::size_t n_r = bp.subset_size();
    const std::size_t n_s = bp.scattering_size();

    // Probe every block with basis vectors and compare entrywise.
    std::vector<double> r_basis(n_r, 0.0), s_basis(n_s, 0.0);
    std::vector<double> r_out(n_r), s_out(n_s);

    for (std::size_t j = 0; j < n_r; ++j) {
        r_basis[j] = 1.0;
        bp.multiply_sr(r_basis, s_out);
        for (std::size_t i = 0; i < n_s; ++i)
            CHECK(s_out[i] == dense(bp.scattering_node(i), subset.member(j)));
        r_basis[j] = 0.0;
        for (std::size_t i = 0; i < n_r; ++i)
            CHECK(bp.direct_block()(i, j) ==
                  doctest::Approx(dense(subset.member(i), subset.member(j))).epsilon(1e-15));
    }
    for (std::size_t j = 0; j < n_s; ++j) {
        s_basis[j] = 1.0;
        bp.multiply_ss(s_basis, s_out);
        bp.multiply_rs(s_basis, r_out);
        for (std::size_t i = 0; i < n_s; ++i)
            CHECK(s_out[i] == dense(bp.scattering_node(i), bp.scattering_node(j)));
        for (std::size_t i = 0; i < n_r; ++i)
            CHECK(r_out[i] == dense(subset.member(i), bp.scattering_node(j)));
        s_basis[j] = 0.0;
    }

    // Unit column check: applying [G_rs; G_ss] to an s-basis vector gives a
    // probability column.
    s_basis[2] = 1.0;
    bp.multiply_ss(s_basis, s_out);
    bp.multiply_rs(s_basis, r_out);
    double colsum = std::accumulate(r_out.begin(), r_out.end(), 0.0) +
                    std::accumulate(s_out.begin(), s_out.end(), 0.0);
    CHECK(colsum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transpose matvecs agree with the dense blocks") {
    DirectedGraph g = make_random_graph({.nodes = 25, .dangling_prob = 0.25, .seed = 7});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(25, 4, 7));
    BlockPartition bp(op, subset);
    DenseMatrix dense = oracle::dense_google(g, 0.85);

    const std::size_t n_s = bp.scattering_size();
    std::mt19937_64 rng(3);
    std::vector<double> v(n_s);
    for (double& x : v) x = static_cast<double>(rng() % 997) / 997.0;

    std::vector<double> got(n_s);
    bp.multiply_ss_transpose(v, got);
    for (std::size_t a = 0; a < n_s; ++a) {
        double want = 0.0;
        for (std::size_t b = 0; b < n_s; ++b)
            want += dense(bp.scattering_node(b), bp.scattering_node(a)) * v[b];
        CHECK(got[a] == doctest::Approx(want).epsilon(1e-13));
    }

    std::vector<double> got_r(bp.subset_size());
    bp.multiply_sr_transpose(v, got_r);
    for (std::size_t j = 0; j < bp.subset_size(); ++j) {
        double want = 0.0;
        for (std::size_t b = 0; b < n_s; ++b)
            want += dense(bp.scattering_node(b), subset.member(j)) * v[b];
        CHECK(got_r[j] == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("leading eigentriple of a scalar operator") {
    DenseMatrix m(1, 1, 0.5);
    DeflationData d = leading_eigentriple(dense_op(m, false), dense_op(m, true), 1);
    CHECK(d.lambda_c == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.psi_right == std::vector<double>{1.0});
    CHECK(d.psi_left == std::vector<double>{1.0});
}

TEST_CASE("leading eigentriple of a diagonal operator") {
    DenseMatrix m(2, 2, 0.0);
    m(0, 0) = 0.9;
    m(1, 1) = 0.2;
    DeflationData d = leading_eigentriple(dense_op(m, false), dense_op(m, true), 2, 1e-14);
    CHECK(d.lambda_c == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(d.psi_right[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(d.psi_right[1]) <= 1e-10);
    CHECK(d.psi_left[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigentriple rejects an operator at the singular point") {
    DenseMatrix m(1, 1, 1.0 - 1e-16);
    CHECK_THROWS_AS(leading_eigentriple(dense_op(m, false), dense_op(m, true), 1),
                    ConvergenceError);
}

TEST_CASE("eigentriple reports non-convergence with the residual") {
    DirectedGraph g = make_random_graph({.nodes = 40, .dangling_prob = 0.2, .seed = 23});
    GoogleOperator op(g, 0.85);
    BlockPartition bp(op, SubsetSelection(g, pick_subset(40, 5, 23)));
    try {
        leading_eigentriple(bp, 1e-14, 1);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.iterations() == 1);
        CHECK(e.residual() > 1e-14);
        CHECK_FALSE(e.last_iterate().empty());
    }
}

TEST_CASE("eigentriple matches the dense eigensolver on a random block") {
    DirectedGraph g = make_random_graph({.nodes = 56, .dangling_prob = 0.15, .seed = 11});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(56, 6, 11));
    BlockPartition bp(op, subset);
    DeflationData d = leading_eigentriple(bp, 1e-14);

    DenseMatrix ss = dense_ss_block(oracle::dense_google(g, 0.85), subset);
    oracle::DenseEigentriple dense = oracle::dense_leading_eigentriple(ss);
    CHECK(std::abs(d.lambda_c - dense.lambda) <= 1e-9);
    CHECK(max_abs_diff(d.psi_right, dense.right) <= 1e-9);

    // Normalization contracts.
    CHECK(std::accumulate(d.psi_right.begin(), d.psi_right.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    double overlap = 0.0;
    for (std::size_t i = 0; i < d.psi_left.size(); ++i) overlap += d.psi_left[i] * d.psi_right[i];
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.residual_right <= 1e-12);
    CHECK(d.residual_left <= 1e-12);
    CHECK(d.lambda_c > 0.0);
    CHECK(d.lambda_c < 1.0);
}

TEST_CASE("one-dimensional scattering space: projector takes everything") {
    DirectedGraph g = three_cycle();
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, {0, 1});
    BlockPartition bp(op, subset);
    DeflationData d = leading_eigentriple(bp);

    // G_ss is the scalar G(2,2) = 0.05.
    CHECK(d.lambda_c == doctest::Approx(0.05).epsilon(1e-13));

    // G_pr is the scalar formula g_rs * g_sr / (1 - g_ss).
    DenseMatrix gpr = compute_gpr(bp, d);
    DenseMatrix dense = oracle::dense_google(g, 0.85);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(gpr(i, j) ==
                  doctest::Approx(dense(i, 2) * dense(2, j) / (1.0 - 0.05)).epsilon(1e-13));

    // Q_c annihilates the whole 1-dimensional space.
    GqrResult gqr = compute_gqr(bp, d);
    for (double x : gqr.matrix.data()) CHECK(std::abs(x) <= 1e-15);
    CHECK(gqr.terms_used == 1);
    CHECK_FALSE(gqr.truncated);
}

TEST_CASE("projector component matches the dense projector formula") {
    DirectedGraph g = make_random_graph({.nodes = 30, .dangling_prob = 0.2, .seed = 13});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(30, 5, 13));
    BlockPartition bp(op, subset);
    DeflationData d = leading_eigentriple(bp, 1e-14);
    DenseMatrix gpr = compute_gpr(bp, d);

    // Dense route: G_rs (psi_R psi_L^T) G_sr / (1 - lambda) from the dense
    // eigensolver.
    DenseMatrix dense = oracle::dense_google(g, 0.85);
    DenseMatrix ss = dense_ss_block(dense, subset);
    oracle::DenseEigentriple t = oracle::dense_leading_eigentriple(ss);

    std::vector<std::size_t> s_nodes;
    {
        std::vector<bool> in_subset(30, false);
        for (NodeId m : subset.members()) in_subset[m] = true;
        for (std::size_t v = 0; v < 30; ++v)
            if (!in_subset[v]) s_nodes.push_back(v);
    }
    const std::size_t n_r = subset.size(), n_s = s_nodes.size();
    DenseMatrix expected(n_r, n_r, 0.0);
    for (std::size_t i = 0; i < n_r; ++i)
        for (std::size_t j = 0; j < n_r; ++j) {
            double left = 0.0, right = 0.0;
            for (std::size_t a = 0; a < n_s; ++a)
                left += dense(subset.member(i), s_nodes[a]) * t.right[a];
            for (std::size_t b = 0; b < n_s; ++b)
                right += t.left[b] * dense(s_nodes[b], subset.member(j));
            expected(i, j) = left * right / (1.0 - t.lambda);
        }
    CHECK(max_abs_diff(gpr, expected) <= 1e-10);
    for (double x : gpr.data()) CHECK(x >= 0.0);
}

TEST_CASE("deflated decomposition equals the dense inverse route") {
    for (std::uint64_t seed : {101u, 102u, 103u}) {
        DirectedGraph g = make_random_graph({.nodes = 30, .dangling_prob = 0.2, .seed = seed});
        GoogleOperator op(g, 0.85);
        SubsetSelection subset(g, pick_subset(30, 5, seed));

        ReduceOptions opts;
        opts.deflation_tol = 1e-14;
        ReducedDecomposition decomp = compute_reduced(op, subset, opts);
        DenseMatrix dense =
            oracle::dense_reduced(oracle::dense_google(g, 0.85), members_of(subset));
        CHECK(max_abs_diff(decomp.g_r, dense) <= 1e-10);
    }
}

TEST_CASE("assemble enforces the decomposition contracts") {
    DirectedGraph g = make_random_graph({.nodes = 40, .dangling_prob = 0.15, .seed = 55});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(40, 6, 55));
    ReduceOptions opts;
    opts.deflation_tol = 1e-14;
    ReducedDecomposition d = compute_reduced(op, subset, opts);

    // Closure, exact diagonal split, weight identity, stochasticity.
    const std::size_t n = subset.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(std::abs(d.g_rr(i, j) + d.g_pr(i, j) + d.g_qr(i, j) - d.g_r(i, j)) <= 1e-13);
            CHECK(d.g_qrd(i, j) + d.g_qrnd(i, j) == d.g_qr(i, j));
            if (i == j) CHECK(d.g_qrnd(i, j) == 0.0);
            else CHECK(d.g_qrd(i, j) == 0.0);
        }
    CHECK(std::abs(d.w_rr + d.w_pr + d.w_qr - 1.0) <= 1e-12);
    for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(d.g_r.column_sum(j) - 1.0) <= 1e-10);
    for (double x : d.g_r.data()) CHECK(x >= -1e-12);
    CHECK(d.negative_weight >= 0.0);

    // Rank-one structure of the projector part.
    double max_entry = 0.0;
    for (double x : d.g_pr.data()) max_entry = std::max(max_entry, std::abs(x));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = j + 1; l < n; ++l) {
                    double minor =
                        d.g_pr(i, j) * d.g_pr(k, l) - d.g_pr(i, l) * d.g_pr(k, j);
                    CHECK(std::abs(minor) <= 1e-12 * max_entry * max_entry);
                }
}

TEST_CASE("assemble rejects inconsistent components") {
    DirectedGraph g = make_random_graph({.nodes = 20, .dangling_prob = 0.1, .seed = 9});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(20, 4, 9));
    BlockPartition bp(op, subset);
    DeflationData defl = leading_eigentriple(bp);
    DenseMatrix gpr = compute_gpr(bp, defl);
    GqrResult gqr = compute_gqr(bp, defl);

    DenseMatrix broken = gpr;
    broken(0, 0) += 1e-3;
    CHECK_THROWS_AS(assemble(bp, defl, broken, gqr), ConsistencyError);
}

TEST_CASE("series terms decay after the opening stretch") {
    DirectedGraph g = make_random_graph({.nodes = 60, .dangling_prob = 0.2, .seed = 31});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(60, 6, 31));
    BlockPartition bp(op, subset);
    DeflationData defl = leading_eigentriple(bp, 1e-14);
    GqrResult gqr = compute_gqr(bp, defl);

    REQUIRE(gqr.term_norms.size() >= 4);
    for (std::size_t l = 3; l + 1 < gqr.term_norms.size(); ++l)
        CHECK(gqr.term_norms[l + 1] <= gqr.term_norms[l] * (1.0 + 1e-9));
    CHECK_FALSE(gqr.truncated);
}

TEST_CASE("series cap is reported as truncation, not an error") {
    DirectedGraph g = make_slow_scattering_graph();
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, {0, 1, 2});
    BlockPartition bp(op, subset);
    DeflationData defl = leading_eigentriple(bp, 1e-14);
    GqrResult gqr = compute_gqr(bp, defl, 1e-12, 2);
    CHECK(gqr.truncated);
    CHECK(gqr.terms_used == 3);  // l = 0 plus two capped iterations
    CHECK(gqr.last_term_norm > 0.0);
}

TEST_CASE("reduced pagerank identity holds end to end") {
    DirectedGraph g = make_random_graph({.nodes = 30, .dangling_prob = 0.2, .seed = 71});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(30, 5, 71));
    ReduceOptions opts;
    opts.deflation_tol = 1e-14;
    ReducedDecomposition decomp = compute_reduced(op, subset, opts);
    RankVector p = pagerank(op, 1e-14, 5000);

    double residual = reduced_pagerank_residual(decomp, p, subset);
    CHECK(residual <= 1e-8);

    // Scale invariance of the relative residual.
    RankVector scaled = p;
    for (double& x : scaled.probabilities) x *= 3.0;
    CHECK(reduced_pagerank_residual(decomp, scaled, subset) ==
          doctest::Approx(residual).epsilon(1e-12));
}

TEST_CASE("hand-checked three-node identity") {
    DirectedGraph g = three_cycle();
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, {0, 1});
    ReducedDecomposition decomp = compute_reduced(op, subset);
    RankVector p = pagerank(op, 1e-15, 5000);
    CHECK(reduced_pagerank_residual(decomp, p, subset) <= 1e-12);
}

TEST_CASE("gpr alignment diagnostic stays in range") {
    DirectedGraph g = make_random_graph({.nodes = 40, .dangling_prob = 0.2, .seed = 81});
    GoogleOperator op(g, 0.85);
    SubsetSelection subset(g, pick_subset(40, 6, 81));
    ReducedDecomposition decomp = compute_reduced(op, subset);
    RankVector p = pagerank(op);
    auto cosines = gpr_pagerank_alignment(decomp, p, subset);
    REQUIRE(cosines.size() == subset.size());
    for (double c : cosines) {
        CHECK(c >= -1.0 - 1e-12);
        CHECK(c <= 1.0 + 1e-12);
    }
}
