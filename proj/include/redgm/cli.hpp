#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace redgm::cli {

/// Effective run configuration. Precedence: command-line flags over config
/// file over these defaults; the resolved values are echoed into
/// summary.json.
struct RunConfig {
    double alpha = 0.85;
    double pagerank_tol = 1e-12;
    std::int64_t pagerank_max_iter = 1000;
    double deflation_tol = 1e-12;
    std::int64_t deflation_max_iter = 200000;
    double series_tol = 1e-12;
    std::int64_t series_l_max = 10000;
    int top_k = 4;
    std::vector<std::string> seeds;

    std::string edges_path;
    std::string labels_path;
    std::string subset_path;
    std::string groups_path;
    std::string out_dir = ".";

    // friends command
    std::string source = "gr";      // gr | gqrnd | grr
    std::string mode = "friends";   // friends | followers
    std::string reduced_dir;        // reuse a previous reduce output

    // oracle command
    std::int64_t oracle_cap = 500;
    std::int64_t surfer_steps = 1000000;
    std::uint64_t surfer_seed = 1;
};

/// Exit codes of the command line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_parse = 2,        // unreadable/malformed inputs
    exit_convergence = 3,  // an iterative solve failed
    exit_consistency = 4,  // internal cross-check failed
    exit_validation = 5,   // oracle validation found a deviation
};

/// Writes pagerank.csv and cheirank.csv; with a subset also
/// local_indices.csv and nondominated.csv.
void cmd_rank(const RunConfig& config);

/// Writes gr.csv, grr.csv, gpr.csv, gqr.csv, gqrd.csv, gqrnd.csv and
/// summary.json.
void cmd_reduce(const RunConfig& config);

/// Writes <mode>_<source>.csv, <mode>_<source>.dot, <mode>_<source>.json.
void cmd_friends(const RunConfig& config);

/// Runs the dense/Monte-Carlo reference implementations against the
/// production pipeline (or against the matrices in reduced_dir when given),
/// writes oracle_report.json, prints one line per check, and throws
/// ValidationError if any check fails.
void cmd_oracle(const RunConfig& config);

/// Maps a thrown exception to the exit-code contract.
int exit_code_for(const std::exception& e);

/// Overlays "key = value" pairs from a flat config file onto the struct.
/// Unknown keys are parse errors; seeds take a comma-separated list.
void apply_config_file(RunConfig& config, const std::string& path);

} // namespace redgm::cli
