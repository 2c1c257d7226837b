// Command-line driver: one subcommand per experiment, a shared --config /
// --out / --seed-list / --threads quartet, and deterministic CSV outputs.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "scalinglab/harness/config.hpp"
#include "scalinglab/harness/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string seed_list;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Experiment config file (key = value sections)");
    cmd->add_option("--out", args.out_dir,
                    "Output directory (overrides SCALINGLAB_OUT and the config)");
    cmd->add_option("--seed-list", args.seed_list, "Comma-separated seeds (default 101..105)");
    cmd->add_option("--threads", args.threads,
                    "Cross-run parallelism; never changes within-run math")
        ->check(CLI::PositiveNumber);
}

int run(const std::string& experiment, const CommonArgs& args) {
    using namespace scalinglab::harness;

    Config config;
    if (!args.config_path.empty()) {
        config = load_config(args.config_path);
    }
    if (const auto configured = config.get("", "experiment");
        configured && *configured != experiment) {
        std::cerr << "error: config selects experiment '" << *configured
                  << "' but the subcommand is '" << experiment << "'\n";
        return 2;
    }
    config.set("", "experiment", experiment);

    RunOptions options;
    options.output_dir = args.out_dir;
    options.threads = args.threads;
    if (!args.seed_list.empty()) {
        Config seeds_only;
        seeds_only.set("", "seeds", args.seed_list);
        options.seeds = get_seed_list(seeds_only, "", "seeds", {});
        if (options.seeds.empty()) {
            std::cerr << "error: --seed-list is empty\n";
            return 2;
        }
    }

    const auto written = run_experiment(config, options);
    for (const auto& path : written) {
        std::cout << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scalinglab: scale/time tradeoff and double-descent experiments"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> experiments = {
        {"subspace-verify", "Monte-Carlo check of the projected-flow deviation bound"},
        {"linear-tradeoff", "Linear-model scale vs training-iterations tradeoff curves"},
        {"ddcurve", "Closed-form error curves over time, scale, or data volume"},
        {"predict", "Cross-scale / cross-time performance prediction"},
        {"nn-tradeoff", "MLP epochs-to-threshold vs width"},
        {"nn-data-scan", "MLP final error vs training set size"},
        {"nn-noise-scan", "MLP error curves under label noise"},
    };

    std::vector<CommonArgs> args(experiments.size());
    std::vector<CLI::App*> commands;
    for (std::size_t i = 0; i < experiments.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(experiments[i].first, experiments[i].second);
        add_common(cmd, args[i]);
        commands.push_back(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < experiments.size(); ++i) {
        if (commands[i]->parsed()) {
            try {
                return run(experiments[i].first, args[i]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
        }
    }
    return 2;
}
