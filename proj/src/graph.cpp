#include "redgm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "redgm/errors.hpp"

namespace redgm {

namespace {

// Splits text into lines, stripping '#' comments and surrounding blanks;
// calls fn(line_number, trimmed) for every non-empty line.
template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t' || line.front() == '\r'))
            line.remove_prefix(1);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.remove_suffix(1);
        if (!line.empty()) fn(line_no, line);
        if (end == text.size()) break;
    }
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

bool parse_uint(std::string_view token, NodeId& out) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return false;
    if (value > 0xffffffffull) return false;
    out = static_cast<NodeId>(value);
    return true;
}

} // namespace

DirectedGraph::DirectedGraph(NodeId node_count, std::vector<std::pair<NodeId, NodeId>> edges,
                             std::vector<std::string> labels)
    : node_count_(node_count), labels_(std::move(labels)) {
    if (node_count_ == 0) throw std::invalid_argument("graph must have at least one node");
    if (!labels_.empty() && labels_.size() != node_count_)
        throw std::invalid_argument("label table size does not match node count");
    for (auto [s, t] : edges)
        if (s >= node_count_ || t >= node_count_)
            throw std::invalid_argument("edge endpoint out of range");

    // Collapse duplicates and drop self-loops; the adjacency is binary.
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    offsets_.assign(node_count_ + 1, 0);
    for (auto [s, t] : edges) ++offsets_[s + 1];
    for (std::size_t j = 0; j < node_count_; ++j) offsets_[j + 1] += offsets_[j];
    targets_.resize(edges.size());
    {
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (auto [s, t] : edges) targets_[cursor[s]++] = t;
    }
    for (NodeId j = 0; j < node_count_; ++j)
        if (out_degree(j) == 0) dangling_.push_back(j);
}

std::string DirectedGraph::label(NodeId j) const {
    if (j >= node_count_) throw std::invalid_argument("node id out of range");
    if (labels_.empty()) return std::to_string(j);
    return labels_[j];
}

bool DirectedGraph::find_label(std::string_view label, NodeId& out) const {
    for (NodeId j = 0; j < labels_.size(); ++j) {
        if (labels_[j] == label) {
            out = j;
            return true;
        }
    }
    return false;
}

DirectedGraph DirectedGraph::reversed() const {
    std::vector<std::pair<NodeId, NodeId>> rev;
    rev.reserve(targets_.size());
    for (NodeId j = 0; j < node_count_; ++j)
        for (NodeId t : out_neighbors(j)) rev.emplace_back(t, j);
    return DirectedGraph(node_count_, std::move(rev), labels_);
}

std::vector<NodeId> DirectedGraph::in_degrees() const {
    std::vector<NodeId> in(node_count_, 0);
    for (NodeId t : targets_) ++in[t];
    return in;
}

std::vector<std::pair<NodeId, NodeId>> DirectedGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(targets_.size());
    for (NodeId j = 0; j < node_count_; ++j)
        for (NodeId t : out_neighbors(j)) out.emplace_back(j, t);
    return out;
}

DirectedGraph parse_edge_list(std::string_view text, const std::vector<std::string>* labels) {
    std::unordered_map<std::string_view, NodeId> label_index;
    if (labels)
        for (NodeId j = 0; j < labels->size(); ++j) label_index.emplace((*labels)[j], j);

    std::vector<std::pair<NodeId, NodeId>> edges;
    NodeId max_id = 0;
    bool any = false;

    for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
        auto tokens = split_tokens(line);
        if (tokens.size() != 2)
            throw ParseError("expected two tokens per edge line, got " +
                                 std::to_string(tokens.size()),
                             line_no);
        NodeId endpoint[2];
        for (int i = 0; i < 2; ++i) {
            if (labels) {
                auto it = label_index.find(tokens[i]);
                if (it == label_index.end())
                    throw ParseError("unknown label '" + std::string(tokens[i]) + "'", line_no);
                endpoint[i] = it->second;
            } else if (!parse_uint(tokens[i], endpoint[i])) {
                throw ParseError("invalid node id '" + std::string(tokens[i]) + "'", line_no);
            }
        }
        edges.emplace_back(endpoint[0], endpoint[1]);
        max_id = std::max({max_id, endpoint[0], endpoint[1]});
        any = true;
    });

    if (!any) throw ParseError("empty edge list");

    NodeId node_count = labels ? static_cast<NodeId>(labels->size()) : max_id + 1;
    return DirectedGraph(node_count, std::move(edges),
                         labels ? *labels : std::vector<std::string>{});
}

std::vector<std::string> parse_label_table(std::string_view text) {
    std::vector<std::pair<NodeId, std::string>> rows;
    for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
        auto tab = line.find('\t');
        if (tab == std::string_view::npos)
            throw ParseError("expected 'id<TAB>label'", line_no);
        NodeId id;
        if (!parse_uint(line.substr(0, tab), id))
            throw ParseError("invalid node id in label table", line_no);
        std::string_view label = line.substr(tab + 1);
        if (label.empty()) throw ParseError("empty label", line_no);
        rows.emplace_back(id, std::string(label));
    });
    if (rows.empty()) throw ParseError("empty label table");

    std::vector<std::string> labels(rows.size());
    std::vector<bool> seen(rows.size(), false);
    for (auto& [id, label] : rows) {
        if (id >= labels.size() || seen[id])
            throw ParseError("label table ids must cover 0.." + std::to_string(labels.size() - 1) +
                             " exactly once");
        seen[id] = true;
        labels[id] = std::move(label);
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (labels[i] == labels[j]) throw ParseError("duplicate label '" + labels[i] + "'");
    return labels;
}

std::string serialize_edge_list(const DirectedGraph& g) {
    std::ostringstream out;
    for (auto [s, t] : g.edges()) out << g.label(s) << ' ' << g.label(t) << '\n';
    return out.str();
}

SubsetSelection::SubsetSelection(const DirectedGraph& g, std::vector<NodeId> members)
    : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("subset must not be empty");
    if (members_.size() >= g.node_count())
        throw std::invalid_argument("subset must leave at least one scattering node");
    std::vector<bool> seen(g.node_count(), false);
    for (NodeId m : members_) {
        if (m >= g.node_count()) throw std::invalid_argument("subset member out of range");
        if (seen[m]) throw std::invalid_argument("duplicate subset member " + g.label(m));
        seen[m] = true;
    }
    labels_.reserve(members_.size());
    for (NodeId m : members_) labels_.push_back(g.label(m));
}

SubsetSelection parse_subset(std::string_view text, const DirectedGraph& g) {
    std::unordered_map<std::string_view, NodeId> label_index;
    if (g.has_labels())
        for (NodeId j = 0; j < g.node_count(); ++j) label_index.emplace(g.labels()[j], j);

    std::vector<NodeId> members;
    for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
        NodeId id;
        if (auto it = label_index.find(line); it != label_index.end()) {
            members.push_back(it->second);
        } else if (parse_uint(line, id) && id < g.node_count()) {
            members.push_back(id);
        } else {
            throw ParseError("cannot resolve subset entry '" + std::string(line) + "'", line_no);
        }
    });
    if (members.empty()) throw ParseError("empty subset file");
    try {
        return SubsetSelection(g, std::move(members));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

} // namespace redgm
