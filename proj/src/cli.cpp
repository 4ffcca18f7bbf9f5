#include "redgm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "redgm/errors.hpp"
#include "redgm/google.hpp"
#include "redgm/graph.hpp"
#include "redgm/interaction.hpp"
#include "redgm/io.hpp"
#include "redgm/oracle.hpp"
#include "redgm/rank.hpp"
#include "redgm/reduced.hpp"

namespace redgm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json config_json(const RunConfig& c) {
    json j;
    j["alpha"] = c.alpha;
    j["pagerank_tol"] = c.pagerank_tol;
    j["pagerank_max_iter"] = c.pagerank_max_iter;
    j["deflation_tol"] = c.deflation_tol;
    j["deflation_max_iter"] = c.deflation_max_iter;
    j["series_tol"] = c.series_tol;
    j["series_l_max"] = c.series_l_max;
    j["top_k"] = c.top_k;
    j["seeds"] = c.seeds;
    j["edges"] = c.edges_path;
    j["labels"] = c.labels_path;
    j["subset"] = c.subset_path;
    j["groups"] = c.groups_path;
    j["out_dir"] = c.out_dir;
    j["source"] = c.source;
    j["mode"] = c.mode;
    j["reduced_dir"] = c.reduced_dir;
    j["oracle_cap"] = c.oracle_cap;
    j["surfer_steps"] = c.surfer_steps;
    j["surfer_seed"] = c.surfer_seed;
    return j;
}

DirectedGraph load_graph(const RunConfig& c) {
    if (c.edges_path.empty()) throw ParseError("no edge list given");
    return io::load_graph(c.edges_path, c.labels_path);
}

ReduceOptions reduce_options(const RunConfig& c) {
    ReduceOptions o;
    o.deflation_tol = c.deflation_tol;
    o.deflation_max_iter = c.deflation_max_iter;
    o.series_tol = c.series_tol;
    o.series_l_max = c.series_l_max;
    return o;
}

std::vector<int> resolve_seeds(const RunConfig& c, const SubsetSelection& subset) {
    if (c.seeds.empty()) throw ParseError("no seeds given (use --seeds)");
    std::vector<int> local;
    for (const std::string& token : c.seeds) {
        int found = -1;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if (subset.labels()[i] == token) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found < 0) {
            NodeId id = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
            if (ec == std::errc{} && ptr == token.data() + token.size()) {
                for (std::size_t i = 0; i < subset.size(); ++i)
                    if (subset.member(i) == id) found = static_cast<int>(i);
            }
        }
        if (found < 0) throw ParseError("unknown seed '" + token + "' (not in the subset)");
        if (std::find(local.begin(), local.end(), found) == local.end()) local.push_back(found);
    }
    return local;
}

} // namespace

void cmd_rank(const RunConfig& config) {
    DirectedGraph g = load_graph(config);
    GoogleOperator op(g, config.alpha);
    RankVector p = pagerank(op, config.pagerank_tol, config.pagerank_max_iter);
    RankVector p_star = cheirank(g, config.alpha, config.pagerank_tol, config.pagerank_max_iter);

    fs::path out(config.out_dir);
    io::write_rank_csv(out / "pagerank.csv", g, p);
    io::write_rank_csv(out / "cheirank.csv", g, p_star);
    std::cout << "pagerank: " << p.iterations_used << " iterations, residual "
              << io::format_double(p.final_residual) << "\n";
    std::cout << "cheirank: " << p_star.iterations_used << " iterations, residual "
              << io::format_double(p_star.final_residual) << "\n";

    if (!config.subset_path.empty()) {
        SubsetSelection subset = io::load_subset(config.subset_path, g);
        LocalIndices idx = local_indices(p, p_star, subset);
        std::vector<int> front = nondominated_front(idx);
        io::write_local_indices_csv(out / "local_indices.csv", subset, idx);
        io::write_nondominated_csv(out / "nondominated.csv", subset, idx, front);
        std::cout << "subset: " << subset.size() << " members, " << front.size()
                  << " non-dominated\n";
    }
}

void cmd_reduce(const RunConfig& config) {
    if (config.subset_path.empty()) throw ParseError("reduce requires a subset file");
    DirectedGraph g = load_graph(config);
    GoogleOperator op(g, config.alpha);
    SubsetSelection subset = io::load_subset(config.subset_path, g);

    BlockPartition bp(op, subset);
    DeflationData defl =
        leading_eigentriple(bp, config.deflation_tol, config.deflation_max_iter);
    DenseMatrix gpr = compute_gpr(bp, defl);
    GqrResult gqr = compute_gqr(bp, defl, config.series_tol, config.series_l_max);
    ReducedDecomposition decomp = assemble(bp, defl, gpr, gqr);

    RankVector p = pagerank(op, config.pagerank_tol, config.pagerank_max_iter);
    double identity_residual = reduced_pagerank_residual(decomp, p, subset);
    std::vector<double> alignment = gpr_pagerank_alignment(decomp, p, subset);

    fs::path out(config.out_dir);
    const auto& labels = subset.labels();
    io::write_matrix_csv(out / "gr.csv", decomp.g_r, labels);
    io::write_matrix_csv(out / "grr.csv", decomp.g_rr, labels);
    io::write_matrix_csv(out / "gpr.csv", decomp.g_pr, labels);
    io::write_matrix_csv(out / "gqr.csv", decomp.g_qr, labels);
    io::write_matrix_csv(out / "gqrd.csv", decomp.g_qrd, labels);
    io::write_matrix_csv(out / "gqrnd.csv", decomp.g_qrnd, labels);

    json summary;
    summary["n"] = g.node_count();
    summary["n_r"] = subset.size();
    summary["lambda_c"] = decomp.lambda_c;
    summary["weights"] = {{"rr", decomp.w_rr}, {"pr", decomp.w_pr}, {"qr", decomp.w_qr}};
    summary["negative_weight"] = decomp.negative_weight;
    summary["series_terms_used"] = decomp.series_terms_used;
    summary["series_truncated"] = decomp.series_truncated;
    summary["residuals"] = {{"pagerank", p.final_residual},
                            {"deflation_right", defl.residual_right},
                            {"deflation_left", defl.residual_left},
                            {"reduced_pagerank_identity", identity_residual}};
    double min_cos = 1.0, mean_cos = 0.0;
    for (double c : alignment) {
        min_cos = std::min(min_cos, c);
        mean_cos += c;
    }
    mean_cos /= alignment.empty() ? 1.0 : static_cast<double>(alignment.size());
    summary["gpr_pagerank_alignment"] = {{"min", min_cos}, {"mean", mean_cos}};
    summary["config"] = config_json(config);
    io::write_file(out / "summary.json", summary.dump(2) + "\n");

    std::cout << "lambda_c " << io::format_double(decomp.lambda_c) << ", weights rr/pr/qr "
              << io::format_double(decomp.w_rr) << " / " << io::format_double(decomp.w_pr)
              << " / " << io::format_double(decomp.w_qr) << ", " << decomp.series_terms_used
              << " series terms\n";
}

void cmd_friends(const RunConfig& config) {
    if (config.subset_path.empty()) throw ParseError("friends requires a subset file");
    if (config.mode != "friends" && config.mode != "followers")
        throw ParseError("mode must be 'friends' or 'followers'");
    if (config.source != "gr" && config.source != "gqrnd" && config.source != "grr")
        throw ParseError("source must be one of gr, gqrnd, grr");

    DirectedGraph g = load_graph(config);
    GoogleOperator op(g, config.alpha);
    SubsetSelection subset = io::load_subset(config.subset_path, g);

    DenseMatrix matrix;
    if (!config.reduced_dir.empty()) {
        io::LabeledMatrix lm =
            io::read_matrix_csv(fs::path(config.reduced_dir) / (config.source + ".csv"));
        if (lm.labels != subset.labels())
            throw ParseError("matrix in " + config.reduced_dir +
                             " was computed for a different subset");
        matrix = std::move(lm.matrix);
    } else {
        ReducedDecomposition decomp = compute_reduced(op, subset, reduce_options(config));
        if (config.source == "gr") matrix = std::move(decomp.g_r);
        else if (config.source == "gqrnd") matrix = std::move(decomp.g_qrnd);
        else matrix = std::move(decomp.g_rr);
    }

    RankVector p = pagerank(op, config.pagerank_tol, config.pagerank_max_iter);
    RankVector p_star = cheirank(g, config.alpha, config.pagerank_tol, config.pagerank_max_iter);
    LocalIndices idx = local_indices(p, p_star, subset);

    std::vector<int> seeds = resolve_seeds(config, subset);
    InteractionMode mode =
        config.mode == "friends" ? InteractionMode::friends : InteractionMode::followers;

    std::vector<std::vector<std::pair<int, double>>> lists;
    for (int s : seeds) {
        lists.push_back(mode == InteractionMode::friends
                            ? top_friends(matrix, s, config.top_k, idx.pagerank_index)
                            : top_followers(matrix, s, config.top_k, idx.pagerank_index));
    }
    InteractionGraph graph =
        build_interaction_graph(matrix, seeds, config.top_k, mode, idx.pagerank_index);

    std::map<std::string, std::string> groups;
    if (!config.groups_path.empty()) {
        groups = io::load_groups(config.groups_path);
        for (int n : graph.nodes)
            if (!groups.count(subset.labels()[n]))
                std::cerr << "warning: no group for '" << subset.labels()[n]
                          << "', using neutral\n";
    }

    fs::path out(config.out_dir);
    const std::string stem = config.mode + "_" + config.source;
    io::write_topk_csv(out / (stem + ".csv"), subset, seeds, lists);
    io::write_file(out / (stem + ".dot"), io::interaction_dot(graph, subset.labels(), groups));
    io::write_file(out / (stem + ".json"), io::interaction_json(graph, subset.labels()));
    std::cout << config.mode << " graph from " << config.source << ": " << graph.nodes.size()
              << " nodes, " << graph.edges.size() << " edges\n";
}

namespace {

struct Check {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

class CheckList {
public:
    // Passes when measured <= threshold.
    void add(const std::string& name, double measured, double threshold) {
        Check c{name, measured, threshold, measured <= threshold};
        std::cout << (c.pass ? "PASS " : "FAIL ") << name
                  << "  measured=" << io::format_double(measured)
                  << " threshold=" << io::format_double(threshold) << "\n";
        checks_.push_back(std::move(c));
    }

    bool all_pass() const {
        return std::all_of(checks_.begin(), checks_.end(),
                           [](const Check& c) { return c.pass; });
    }

    json to_json() const {
        json arr = json::array();
        for (const Check& c : checks_)
            arr.push_back({{"name", c.name},
                           {"measured", c.measured},
                           {"threshold", c.threshold},
                           {"pass", c.pass}});
        return arr;
    }

    std::string failing() const {
        std::string out;
        for (const Check& c : checks_)
            if (!c.pass) out += (out.empty() ? "" : ", ") + c.name;
        return out;
    }

private:
    std::vector<Check> checks_;
};

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

double max_column_sum_error(const DenseMatrix& m) {
    double e = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) e = std::max(e, std::abs(m.column_sum(j) - 1.0));
    return e;
}

double min_entry(const DenseMatrix& m) {
    double v = std::numeric_limits<double>::infinity();
    for (double x : m.data()) v = std::min(v, x);
    return v;
}

double max_rank_one_minor(const DenseMatrix& m) {
    double max_entry = 0.0;
    for (double x : m.data()) max_entry = std::max(max_entry, std::abs(x));
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = i + 1; k < m.rows(); ++k)
            for (std::size_t j = 0; j < m.cols(); ++j)
                for (std::size_t l = j + 1; l < m.cols(); ++l)
                    worst = std::max(worst,
                                     std::abs(m(i, j) * m(k, l) - m(i, l) * m(k, j)));
    return max_entry > 0.0 ? worst / (max_entry * max_entry) : worst;
}

} // namespace

void cmd_oracle(const RunConfig& config) {
    if (config.subset_path.empty()) throw ParseError("oracle requires a subset file");
    DirectedGraph g = load_graph(config);
    GoogleOperator op(g, config.alpha);
    SubsetSelection subset = io::load_subset(config.subset_path, g);

    if (g.node_count() > config.oracle_cap)
        throw ParseError("graph exceeds the oracle cap (" + std::to_string(g.node_count()) +
                         " > " + std::to_string(config.oracle_cap) + " nodes)");

    DenseMatrix g_dense =
        oracle::dense_google(g, config.alpha, static_cast<std::size_t>(config.oracle_cap));
    DenseMatrix r_dense = oracle::dense_reduced(
        g_dense, std::span<const NodeId>(subset.members().data(), subset.size()));

    CheckList checks;
    checks.add("dense_google_column_sums", max_column_sum_error(g_dense), 1e-14);
    checks.add("dense_reduced_column_sums", max_column_sum_error(r_dense), 1e-12);

    // Production pipeline, either recomputed here or read back from a
    // previous reduce run.
    DenseMatrix g_r, g_rr, g_pr, g_qr;
    json source_info;
    if (!config.reduced_dir.empty()) {
        fs::path dir(config.reduced_dir);
        auto read = [&](const char* name) {
            io::LabeledMatrix lm = io::read_matrix_csv(dir / name);
            if (lm.labels != subset.labels())
                throw ParseError(std::string(name) + " in " + config.reduced_dir +
                                 " was computed for a different subset");
            return std::move(lm.matrix);
        };
        g_r = read("gr.csv");
        g_rr = read("grr.csv");
        g_pr = read("gpr.csv");
        g_qr = read("gqr.csv");
        DenseMatrix g_qrd = read("gqrd.csv");
        DenseMatrix g_qrnd = read("gqrnd.csv");
        double split_err = 0.0;
        for (std::size_t i = 0; i < g_qr.rows(); ++i)
            for (std::size_t j = 0; j < g_qr.cols(); ++j)
                split_err = std::max(split_err, std::abs(g_qrd(i, j) + g_qrnd(i, j) - g_qr(i, j)));
        checks.add("stored_diagonal_split_exact", split_err, 0.0);
        const double n_r = static_cast<double>(subset.size());
        checks.add("weight_identity",
                   std::abs((g_rr.sum() + g_pr.sum() + g_qr.sum()) / n_r - 1.0), 1e-12);
        source_info = config.reduced_dir;
    } else {
        ReducedDecomposition decomp = compute_reduced(op, subset, reduce_options(config));
        g_r = std::move(decomp.g_r);
        g_rr = std::move(decomp.g_rr);
        g_pr = std::move(decomp.g_pr);
        g_qr = std::move(decomp.g_qr);
        checks.add("weight_identity",
                   std::abs(decomp.w_rr + decomp.w_pr + decomp.w_qr - 1.0), 1e-12);
        source_info = "recomputed";
    }

    checks.add("deflated_vs_dense_inverse", max_abs_diff(g_r, r_dense), 1e-10);
    checks.add("reduced_column_sums", max_column_sum_error(g_r), 1e-10);
    checks.add("reduced_nonnegative", std::max(0.0, -min_entry(g_r)), 1e-12);

    double closure = 0.0;
    for (std::size_t i = 0; i < g_r.rows(); ++i)
        for (std::size_t j = 0; j < g_r.cols(); ++j)
            closure = std::max(closure,
                               std::abs(g_rr(i, j) + g_pr(i, j) + g_qr(i, j) - g_r(i, j)));
    checks.add("decomposition_closure", closure, 1e-13);
    checks.add("gpr_rank_one_minors", max_rank_one_minor(g_pr), 1e-12);

    // Truncated raw series: the error against the direct inverse must shrink
    // monotonically and reach 1e-8 at some depth.
    auto members = std::span<const NodeId>(subset.members().data(), subset.size());
    double prev_err = std::numeric_limits<double>::infinity();
    double series_err = prev_err;
    double monotonicity_violation = 0.0;
    for (std::int64_t l = 1; l <= 8192; l *= 2) {
        DenseMatrix approx = oracle::dense_series_reduced(g_dense, members, l);
        series_err = max_abs_diff(approx, r_dense);
        monotonicity_violation =
            std::max(monotonicity_violation, series_err - prev_err);
        prev_err = series_err;
        if (series_err <= 1e-8) break;
    }
    checks.add("raw_series_monotone_approach", monotonicity_violation, 1e-15);
    checks.add("raw_series_limit", series_err, 1e-8);

    RankVector p = pagerank(op, config.pagerank_tol, config.pagerank_max_iter);
    std::vector<double> p_dense = oracle::dense_dominant_eigenvector(g_dense);
    double eig_err = 0.0;
    for (std::size_t i = 0; i < p_dense.size(); ++i)
        eig_err = std::max(eig_err, std::abs(p_dense[i] - p.probabilities[i]));
    checks.add("pagerank_vs_dense_eigenvector", eig_err, 1e-10);

    RankVector surfer = oracle::random_surfer(g, config.alpha, config.surfer_steps,
                                              config.surfer_seed);
    double worst_sigma_ratio = 0.0;
    for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
        const double prob = p.probabilities[i];
        const double sigma =
            std::sqrt(prob * (1.0 - prob) / static_cast<double>(config.surfer_steps));
        if (sigma == 0.0) continue;
        worst_sigma_ratio =
            std::max(worst_sigma_ratio, std::abs(surfer.probabilities[i] - prob) / sigma);
    }
    checks.add("surfer_within_3_sigma", worst_sigma_ratio, 3.0);

    ReducedDecomposition for_identity;
    for_identity.g_r = g_r;
    checks.add("reduced_pagerank_identity",
               reduced_pagerank_residual(for_identity, p, subset), 1e-8);

    json report;
    report["fixture"] = {{"edges", config.edges_path},
                         {"n", g.node_count()},
                         {"n_r", subset.size()},
                         {"production_matrices", source_info}};
    report["surfer"] = {{"steps", config.surfer_steps}, {"seed", config.surfer_seed}};
    report["checks"] = checks.to_json();
    report["config"] = config_json(config);
    io::write_file(fs::path(config.out_dir) / "oracle_report.json", report.dump(2) + "\n");

    if (!checks.all_pass())
        throw ValidationError("oracle validation failed: " + checks.failing());
    std::cout << "all oracle checks passed\n";
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return exit_parse;
    if (dynamic_cast<const ConvergenceError*>(&e)) return exit_convergence;
    if (dynamic_cast<const ConsistencyError*>(&e)) return exit_consistency;
    if (dynamic_cast<const ValidationError*>(&e)) return exit_validation;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return exit_parse;
    return 1;
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::istringstream in(io::read_file(path));
    std::string line;
    std::size_t line_no = 0;

    auto set_double = [](double& field) {
        return [&field](const std::string& v) { field = std::stod(v); };
    };
    auto set_int = [](std::int64_t& field) {
        return [&field](const std::string& v) { field = std::stoll(v); };
    };
    auto set_string = [](std::string& field) {
        return [&field](const std::string& v) { field = v; };
    };

    std::map<std::string, std::function<void(const std::string&)>> setters;
    setters["alpha"] = set_double(config.alpha);
    setters["pagerank_tol"] = set_double(config.pagerank_tol);
    setters["pagerank_max_iter"] = set_int(config.pagerank_max_iter);
    setters["deflation_tol"] = set_double(config.deflation_tol);
    setters["deflation_max_iter"] = set_int(config.deflation_max_iter);
    setters["series_tol"] = set_double(config.series_tol);
    setters["series_l_max"] = set_int(config.series_l_max);
    setters["top_k"] = [&config](const std::string& v) { config.top_k = std::stoi(v); };
    setters["seeds"] = [&config](const std::string& v) {
        config.seeds.clear();
        std::istringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            while (!item.empty() && item.front() == ' ') item.erase(item.begin());
            while (!item.empty() && item.back() == ' ') item.pop_back();
            if (!item.empty()) config.seeds.push_back(item);
        }
    };
    setters["edges"] = set_string(config.edges_path);
    setters["labels"] = set_string(config.labels_path);
    setters["subset"] = set_string(config.subset_path);
    setters["groups"] = set_string(config.groups_path);
    setters["out_dir"] = set_string(config.out_dir);
    setters["source"] = set_string(config.source);
    setters["mode"] = set_string(config.mode);
    setters["reduced_dir"] = set_string(config.reduced_dir);
    setters["oracle_cap"] = set_int(config.oracle_cap);
    setters["surfer_steps"] = set_int(config.surfer_steps);
    setters["surfer_seed"] = [&config](const std::string& v) {
        config.surfer_seed = std::stoull(v);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto eq = line.find('=');
        std::string key = eq == std::string::npos ? line : line.substr(0, eq);
        std::string value = eq == std::string::npos ? "" : line.substr(eq + 1);
        auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.pop_back();
        };
        trim(key);
        trim(value);
        if (key.empty() && value.empty()) continue;
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        auto it = setters.find(key);
        if (it == setters.end()) throw ParseError("unknown config key '" + key + "'", line_no);
        try {
            it->second(value);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("invalid value '" + value + "' for key '" + key + "'", line_no);
        }
    }
}

} // namespace redgm::cli
