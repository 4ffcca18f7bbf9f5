#include "redgm/interaction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace redgm {

namespace {

int rank_of(std::span<const int> tie_rank, int i) {
    return tie_rank.empty() ? i : tie_rank[i];
}

std::vector<std::pair<int, double>> top_entries(const DenseMatrix& m, int j, int k, bool column,
                                                std::span<const int> tie_rank) {
    const int n = static_cast<int>(m.rows());
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
    if (j < 0 || j >= n) throw std::invalid_argument("index out of range");
    if (k < 1 || k > n - 1) throw std::invalid_argument("k must lie in [1, N_r - 1]");
    if (!tie_rank.empty() && tie_rank.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("tie rank size mismatch");

    // Diagonal masked; only strictly positive entries are eligible, so
    // negative hidden-link values are never selected.
    std::vector<std::pair<int, double>> entries;
    entries.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const double v = column ? m(i, j) : m(j, i);
        if (v > 0.0) entries.emplace_back(i, v);
    }
    std::sort(entries.begin(), entries.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        if (rank_of(tie_rank, a.first) != rank_of(tie_rank, b.first))
            return rank_of(tie_rank, a.first) < rank_of(tie_rank, b.first);
        return a.first < b.first;
    });
    if (entries.size() > static_cast<std::size_t>(k)) entries.resize(k);
    return entries;
}

} // namespace

std::vector<std::pair<int, double>> top_friends(const DenseMatrix& m, int j, int k,
                                                std::span<const int> tie_rank) {
    return top_entries(m, j, k, /*column=*/true, tie_rank);
}

std::vector<std::pair<int, double>> top_followers(const DenseMatrix& m, int j, int k,
                                                  std::span<const int> tie_rank) {
    return top_entries(m, j, k, /*column=*/false, tie_rank);
}

InteractionGraph build_interaction_graph(const DenseMatrix& m, std::span<const int> seeds,
                                         int k, InteractionMode mode,
                                         std::span<const int> tie_rank) {
    const int n = static_cast<int>(m.rows());
    if (seeds.empty()) throw std::invalid_argument("seed list must not be empty");
    for (int s : seeds)
        if (s < 0 || s >= n) throw std::invalid_argument("seed index out of range");
    if (!tie_rank.empty() && tie_rank.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("tie rank size mismatch");

    InteractionGraph graph;
    graph.mode = mode;
    graph.k = k;

    auto by_rank = [&](int a, int b) {
        if (rank_of(tie_rank, a) != rank_of(tie_rank, b))
            return rank_of(tie_rank, a) < rank_of(tie_rank, b);
        return a < b;
    };

    std::vector<bool> in_graph(n, false);
    std::vector<int> frontier(seeds.begin(), seeds.end());
    std::sort(frontier.begin(), frontier.end(), by_rank);
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    for (int s : frontier) in_graph[s] = true;

    EdgeLevel level = EdgeLevel::seed;
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int u : frontier) {
            auto list = mode == InteractionMode::friends ? top_friends(m, u, k, tie_rank)
                                                         : top_followers(m, u, k, tie_rank);
            for (auto [t, value] : list) {
                if (mode == InteractionMode::friends)
                    graph.edges.push_back({u, t, level});
                else
                    graph.edges.push_back({t, u, level});
                if (!in_graph[t]) {
                    in_graph[t] = true;
                    next.push_back(t);
                }
            }
        }
        std::sort(next.begin(), next.end(), by_rank);
        frontier = std::move(next);
        level = EdgeLevel::derived;
    }

    for (int i = 0; i < n; ++i)
        if (in_graph[i]) graph.nodes.push_back(i);
    return graph;
}

std::vector<ConsensusEntry> cross_source_consensus(const std::vector<std::vector<int>>& lists,
                                                   int m) {
    if (lists.empty()) throw std::invalid_argument("need at least one list");
    if (m < 1 || m > static_cast<int>(lists.size()))
        throw std::invalid_argument("consensus threshold exceeds the number of lists");

    std::map<int, int> counts;
    for (const auto& list : lists) {
        std::set<int> unique(list.begin(), list.end());
        for (int member : unique) ++counts[member];
    }

    std::vector<ConsensusEntry> result;
    for (auto [member, count] : counts)
        if (count >= m) result.push_back({member, count});
    std::sort(result.begin(), result.end(), [](const ConsensusEntry& a, const ConsensusEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.member < b.member;
    });
    return result;
}

} // namespace redgm
