#include "redgm/rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "redgm/errors.hpp"

namespace redgm {

namespace {

RankVector power_iterate(const GoogleOperator& op, RankKind kind, double tol,
                         std::int64_t max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

    const std::size_t n = op.size();
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> w(n);

    double residual = 0.0;
    for (std::int64_t it = 1; it <= max_iter; ++it) {
        op.apply(v, w);
        // Guard against slow drift of the total mass over many iterations.
        double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& x : w) x /= total;
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += std::abs(w[i] - v[i]);
        v.swap(w);
        if (residual <= tol) return RankVector{std::move(v), kind, it, residual};
    }
    throw ConvergenceError("power iteration did not reach tolerance " + std::to_string(tol) +
                               " after " + std::to_string(max_iter) + " iterations",
                           residual, max_iter, std::move(v));
}

} // namespace

RankVector pagerank(const GoogleOperator& op, double tol, std::int64_t max_iter) {
    return power_iterate(op, RankKind::pagerank, tol, max_iter);
}

RankVector cheirank(const DirectedGraph& g, double alpha, double tol, std::int64_t max_iter) {
    DirectedGraph reversed = g.reversed();
    GoogleOperator op(reversed, alpha);
    RankVector result = power_iterate(op, RankKind::cheirank, tol, max_iter);
    return result;
}

namespace {

std::vector<int> ranks_for(const std::vector<double>& probabilities,
                           std::span<const NodeId> members) {
    std::vector<int> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double pa = probabilities[members[a]];
        double pb = probabilities[members[b]];
        if (pa != pb) return pa > pb;
        return members[a] < members[b];
    });
    std::vector<int> rank(members.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r) + 1;
    return rank;
}

} // namespace

LocalIndices local_indices(const RankVector& p, const RankVector& p_star,
                           const SubsetSelection& subset) {
    if (p.probabilities.size() != p_star.probabilities.size())
        throw std::invalid_argument("rank vectors cover different node counts");
    for (NodeId m : subset.members())
        if (m >= p.probabilities.size())
            throw std::invalid_argument("subset member outside rank vector");
    return LocalIndices{ranks_for(p.probabilities, subset.members()),
                        ranks_for(p_star.probabilities, subset.members())};
}

std::vector<int> nondominated_front(const LocalIndices& idx) {
    const std::size_t n = idx.pagerank_index.size();
    std::vector<int> by_k(n);
    std::iota(by_k.begin(), by_k.end(), 0);
    std::sort(by_k.begin(), by_k.end(),
              [&](int a, int b) { return idx.pagerank_index[a] < idx.pagerank_index[b]; });

    // Sweeping in K order, a member is dominated iff some earlier member has
    // a strictly smaller K*.
    std::vector<int> front;
    int best_k_star = std::numeric_limits<int>::max();
    for (int m : by_k) {
        if (idx.cheirank_index[m] < best_k_star) {
            front.push_back(m);
            best_k_star = idx.cheirank_index[m];
        }
    }
    return front;
}

} // namespace redgm
