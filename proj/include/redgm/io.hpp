#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "redgm/graph.hpp"
#include "redgm/interaction.hpp"
#include "redgm/matrix.hpp"
#include "redgm/rank.hpp"

namespace redgm::io {

/// Shortest-width formatting with 17 significant digits, lossless for
/// round-tripping doubles.
std::string format_double(double v);

/// RFC-4180 style quoting, applied only when the field needs it.
std::string csv_escape(const std::string& field);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// Edge list + optional label table from disk.
DirectedGraph load_graph(const std::filesystem::path& edges_path,
                         const std::filesystem::path& labels_path = {});

SubsetSelection load_subset(const std::filesystem::path& path, const DirectedGraph& g);

/// Group file: one "label<TAB>group" per line, '#' comments.
std::map<std::string, std::string> load_groups(const std::filesystem::path& path);

/// Columns: node_id,label,probability,global_rank (rank 1 = largest
/// probability, ties by ascending node id).
void write_rank_csv(const std::filesystem::path& path, const DirectedGraph& g,
                    const RankVector& rank);

/// Columns: node_id,label,K,K_star in subset member order.
void write_local_indices_csv(const std::filesystem::path& path, const SubsetSelection& subset,
                             const LocalIndices& idx);

/// The non-dominated members (same columns), sorted by ascending K.
void write_nondominated_csv(const std::filesystem::path& path, const SubsetSelection& subset,
                            const LocalIndices& idx, std::span<const int> front);

/// Header line = subset labels, then one row of values per line.
void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m,
                      std::span<const std::string> labels);

struct LabeledMatrix {
    DenseMatrix matrix;
    std::vector<std::string> labels;
};

LabeledMatrix read_matrix_csv(const std::filesystem::path& path);

/// Columns: seed_id,seed_label,rank,member_id,member_label,value.
void write_topk_csv(const std::filesystem::path& path, const SubsetSelection& subset,
                    std::span<const int> seeds,
                    const std::vector<std::vector<std::pair<int, double>>>& lists);

/// DOT digraph: seed edges style=bold, derived edges color=red, nodes filled
/// with the group color (neutral lightgray when the label has no group).
std::string interaction_dot(const InteractionGraph& graph,
                            std::span<const std::string> labels,
                            const std::map<std::string, std::string>& groups);

/// JSON edge-list alternative to the DOT output.
std::string interaction_json(const InteractionGraph& graph,
                             std::span<const std::string> labels);

} // namespace redgm::io
