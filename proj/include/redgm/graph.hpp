#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace redgm {

/// Dense node index in [0, N).
using NodeId = std::uint32_t;

/// Immutable sparse directed graph in CSR (out-adjacency) form.
///
/// Construction collapses duplicate edges and drops self-loops, so the stored
/// adjacency is binary. Dangling nodes (out-degree zero) are tracked
/// explicitly since the stochastic operator treats their columns as uniform.
class DirectedGraph {
public:
    /// Builds from an arbitrary (source, target) edge list. Endpoints must be
    /// < node_count. If labels are given there must be exactly node_count of
    /// them; otherwise nodes are labeled by their decimal id.
    DirectedGraph(NodeId node_count, std::vector<std::pair<NodeId, NodeId>> edges,
                  std::vector<std::string> labels = {});

    NodeId node_count() const { return node_count_; }
    std::size_t edge_count() const { return targets_.size(); }

    std::span<const NodeId> out_neighbors(NodeId j) const {
        return {targets_.data() + offsets_[j], targets_.data() + offsets_[j + 1]};
    }
    NodeId out_degree(NodeId j) const {
        return static_cast<NodeId>(offsets_[j + 1] - offsets_[j]);
    }
    bool is_dangling(NodeId j) const { return out_degree(j) == 0; }
    std::span<const NodeId> dangling_nodes() const { return dangling_; }

    bool has_labels() const { return !labels_.empty(); }
    /// The raw label table; empty when nodes are unlabeled.
    const std::vector<std::string>& labels() const { return labels_; }
    std::string label(NodeId j) const;
    /// Resolves a label to its node id; returns false if absent or unlabeled.
    bool find_label(std::string_view label, NodeId& out) const;

    /// Graph with every edge direction inverted; labels carried over.
    DirectedGraph reversed() const;

    /// In-degree of every node (equals out-degrees of the reversed graph).
    std::vector<NodeId> in_degrees() const;

    /// All edges as (source, target) pairs, sorted. Round-trips through the
    /// constructor.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

private:
    NodeId node_count_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<NodeId> dangling_;
    std::vector<std::string> labels_;
};

/// Parses line-oriented edge data: one "source target" pair per line,
/// whitespace separated, '#' starts a comment. With a label table the tokens
/// are labels resolved through it and the node universe is the table; without
/// one the tokens are non-negative integers and the universe is [0, max id].
DirectedGraph parse_edge_list(std::string_view text,
                              const std::vector<std::string>* labels = nullptr);

/// Parses a label table: one "id<TAB>label" per line, ids 0..size-1, '#'
/// comments allowed. Labels must be unique and non-empty.
std::vector<std::string> parse_label_table(std::string_view text);

/// Serializes a graph back to edge-list text (sorted, labels when present).
std::string serialize_edge_list(const DirectedGraph& g);

/// Ordered subset of nodes; its member order fixes the row/column order of
/// every reduced matrix built from it.
class SubsetSelection {
public:
    /// Members must be distinct, valid, and leave at least one node outside
    /// the subset.
    SubsetSelection(const DirectedGraph& g, std::vector<NodeId> members);

    std::span<const NodeId> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    NodeId member(std::size_t local) const { return members_[local]; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<NodeId> members_;
    std::vector<std::string> labels_;
};

/// Parses a subset file: one node per line (label or integer id), '#'
/// comments, order preserved.
SubsetSelection parse_subset(std::string_view text, const DirectedGraph& g);

} // namespace redgm
