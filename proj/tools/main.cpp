#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "redgm/cli.hpp"

namespace {

using redgm::cli::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--edges", config.edges_path, "Edge list file (one 'source target' per line)");
    cmd->add_option("--labels", config.labels_path, "Label table file (one 'id<TAB>label' per line)");
    cmd->add_option("--subset", config.subset_path, "Subset file (one label or id per line)");
    cmd->add_option("--out", config.out_dir, "Output directory");
    cmd->add_option("--alpha", config.alpha, "Damping factor")->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cmd->add_option("--pagerank-tol", config.pagerank_tol, "PageRank L1 convergence threshold");
    cmd->add_option("--pagerank-max-iter", config.pagerank_max_iter, "PageRank iteration cap");
}

void add_reduce_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--deflation-tol", config.deflation_tol,
                    "Scattering-block eigenvector convergence threshold");
    cmd->add_option("--deflation-max-iter", config.deflation_max_iter,
                    "Scattering-block power iteration cap");
    cmd->add_option("--series-tol", config.series_tol, "Hidden-link series stopping threshold");
    cmd->add_option("--series-l-max", config.series_l_max, "Hidden-link series term cap");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PageRank/CheiRank and reduced Google matrix analysis of directed networks"};
    app.require_subcommand(1);

    RunConfig config;

    // Flat key=value config file, overridden by any flag given explicitly.
    std::string config_path;
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    }
    if (!config_path.empty()) {
        try {
            redgm::cli::apply_config_file(config, config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return redgm::cli::exit_code_for(e);
        }
    }

    CLI::App* rank = app.add_subcommand("rank", "Compute PageRank and CheiRank vectors");
    add_common_options(rank, config);

    CLI::App* reduce = app.add_subcommand(
        "reduce", "Compute the reduced Google matrix and its decomposition for a subset");
    add_common_options(reduce, config);
    add_reduce_options(reduce, config);

    CLI::App* friends = app.add_subcommand(
        "friends", "Extract top-k friend/follower lists and the interaction graph");
    add_common_options(friends, config);
    add_reduce_options(friends, config);
    friends->add_option("--source", config.source, "Matrix to rank from: gr, gqrnd or grr");
    friends->add_option("--mode", config.mode, "friends or followers");
    friends->add_option("--top-k", config.top_k, "List length per node")->check(CLI::PositiveNumber);
    friends->add_option("--seeds", config.seeds, "Seed nodes (labels or ids)")->delimiter(',');
    friends->add_option("--groups", config.groups_path, "Group file (one 'label<TAB>group' per line)");
    friends->add_option("--reduced-dir", config.reduced_dir,
                        "Reuse matrices written by a previous reduce run");

    CLI::App* oracle = app.add_subcommand(
        "oracle", "Validate the production pipeline against dense and Monte Carlo references");
    add_common_options(oracle, config);
    add_reduce_options(oracle, config);
    oracle->add_option("--oracle-cap", config.oracle_cap, "Maximum node count for dense checks");
    oracle->add_option("--surfer-steps", config.surfer_steps, "Random-walk length");
    oracle->add_option("--surfer-seed", config.surfer_seed, "Random-walk seed");
    oracle->add_option("--reduced-dir", config.reduced_dir,
                       "Validate matrices written by a previous reduce run");

    for (CLI::App* cmd : {rank, reduce, friends, oracle}) {
        std::string ignored;
        cmd->add_option("--config", ignored, "Flat key=value config file");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (rank->parsed()) redgm::cli::cmd_rank(config);
        else if (reduce->parsed()) redgm::cli::cmd_reduce(config);
        else if (friends->parsed()) redgm::cli::cmd_friends(config);
        else if (oracle->parsed()) redgm::cli::cmd_oracle(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return redgm::cli::exit_code_for(e);
    }
    return 0;
}
