#include "redgm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "redgm/errors.hpp"

namespace redgm::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open file for writing: " + path.string());
    out << content;
    if (!out) throw ParseError("failed writing file: " + path.string());
}

DirectedGraph load_graph(const std::filesystem::path& edges_path,
                         const std::filesystem::path& labels_path) {
    if (labels_path.empty()) return parse_edge_list(read_file(edges_path));
    std::vector<std::string> labels = parse_label_table(read_file(labels_path));
    return parse_edge_list(read_file(edges_path), &labels);
}

SubsetSelection load_subset(const std::filesystem::path& path, const DirectedGraph& g) {
    return parse_subset(read_file(path), g);
}

std::map<std::string, std::string> load_groups(const std::filesystem::path& path) {
    std::map<std::string, std::string> groups;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("expected 'label<TAB>group' in group file", line_no);
        groups[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return groups;
}

void write_rank_csv(const std::filesystem::path& path, const DirectedGraph& g,
                    const RankVector& rank) {
    const std::size_t n = rank.probabilities.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rank.probabilities[a] != rank.probabilities[b])
            return rank.probabilities[a] > rank.probabilities[b];
        return a < b;
    });
    std::vector<std::size_t> global_rank(n);
    for (std::size_t r = 0; r < n; ++r) global_rank[order[r]] = r + 1;

    std::ostringstream out;
    out << "node_id,label,probability,global_rank\n";
    for (std::size_t i = 0; i < n; ++i)
        out << i << ',' << csv_escape(g.label(static_cast<NodeId>(i))) << ','
            << format_double(rank.probabilities[i]) << ',' << global_rank[i] << '\n';
    write_file(path, out.str());
}

void write_local_indices_csv(const std::filesystem::path& path, const SubsetSelection& subset,
                             const LocalIndices& idx) {
    std::ostringstream out;
    out << "node_id,label,K,K_star\n";
    for (std::size_t i = 0; i < subset.size(); ++i)
        out << subset.member(i) << ',' << csv_escape(subset.labels()[i]) << ','
            << idx.pagerank_index[i] << ',' << idx.cheirank_index[i] << '\n';
    write_file(path, out.str());
}

void write_nondominated_csv(const std::filesystem::path& path, const SubsetSelection& subset,
                            const LocalIndices& idx, std::span<const int> front) {
    std::ostringstream out;
    out << "node_id,label,K,K_star\n";
    for (int m : front)
        out << subset.member(m) << ',' << csv_escape(subset.labels()[m]) << ','
            << idx.pagerank_index[m] << ',' << idx.cheirank_index[m] << '\n';
    write_file(path, out.str());
}

void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m,
                      std::span<const std::string> labels) {
    if (labels.size() != m.cols()) throw std::invalid_argument("label count mismatch");
    std::ostringstream out;
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (j) out << ',';
        out << csv_escape(labels[j]);
    }
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    write_file(path, out.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw ParseError("unterminated quote in CSV", line_no);
    fields.push_back(std::move(field));
    return fields;
}

} // namespace

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty matrix CSV: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();

    LabeledMatrix result;
    result.labels = split_csv_line(line, 1);
    const std::size_t n = result.labels.size();
    result.matrix = DenseMatrix(n, n);

    std::size_t row = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row >= n) throw ParseError("too many rows in matrix CSV", line_no);
        auto fields = split_csv_line(line, line_no);
        if (fields.size() != n)
            throw ParseError("expected " + std::to_string(n) + " columns, got " +
                                 std::to_string(fields.size()),
                             line_no);
        for (std::size_t j = 0; j < n; ++j) {
            try {
                result.matrix(row, j) = std::stod(fields[j]);
            } catch (const std::exception&) {
                throw ParseError("invalid number '" + fields[j] + "'", line_no);
            }
        }
        ++row;
    }
    if (row != n) throw ParseError("matrix CSV has " + std::to_string(row) + " rows for " +
                                   std::to_string(n) + " columns");
    return result;
}

void write_topk_csv(const std::filesystem::path& path, const SubsetSelection& subset,
                    std::span<const int> seeds,
                    const std::vector<std::vector<std::pair<int, double>>>& lists) {
    if (seeds.size() != lists.size()) throw std::invalid_argument("seed/list count mismatch");
    std::ostringstream out;
    out << "seed_id,seed_label,rank,member_id,member_label,value\n";
    for (std::size_t s = 0; s < lists.size(); ++s) {
        for (std::size_t r = 0; r < lists[s].size(); ++r) {
            auto [member, value] = lists[s][r];
            out << subset.member(seeds[s]) << ',' << csv_escape(subset.labels()[seeds[s]]) << ','
                << r + 1 << ',' << subset.member(member) << ','
                << csv_escape(subset.labels()[member]) << ',' << format_double(value) << '\n';
        }
    }
    write_file(path, out.str());
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string interaction_dot(const InteractionGraph& graph,
                            std::span<const std::string> labels,
                            const std::map<std::string, std::string>& groups) {
    std::ostringstream out;
    out << "digraph interaction {\n";
    out << "  node [style=filled, fillcolor=lightgray];\n";
    for (int n : graph.nodes) {
        const std::string& label = labels[n];
        out << "  \"" << dot_escape(label) << '"';
        auto it = groups.find(label);
        if (it != groups.end()) out << " [fillcolor=\"" << dot_escape(it->second) << "\"]";
        out << ";\n";
    }
    for (const InteractionEdge& e : graph.edges) {
        out << "  \"" << dot_escape(labels[e.from]) << "\" -> \"" << dot_escape(labels[e.to])
            << "\" [" << (e.level == EdgeLevel::seed ? "style=bold" : "color=red") << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string interaction_json(const InteractionGraph& graph,
                             std::span<const std::string> labels) {
    nlohmann::json j;
    j["mode"] = graph.mode == InteractionMode::friends ? "friends" : "followers";
    j["k"] = graph.k;
    j["nodes"] = nlohmann::json::array();
    for (int n : graph.nodes) j["nodes"].push_back(labels[n]);
    j["edges"] = nlohmann::json::array();
    for (const InteractionEdge& e : graph.edges) {
        j["edges"].push_back({{"from", labels[e.from]},
                              {"to", labels[e.to]},
                              {"level", e.level == EdgeLevel::seed ? "seed" : "derived"}});
    }
    return j.dump(2) + "\n";
}

} // namespace redgm::io
