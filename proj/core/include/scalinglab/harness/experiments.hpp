#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scalinglab/harness/config.hpp"

namespace scalinglab::harness {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind {
    SubspaceVerify,
    LinearTradeoff,
    DdCurve,
    Predict,
    NnTradeoff,
    NnDataScan,
    NnNoiseScan,
};

/// Maps the CLI subcommand / config value to the experiment; throws
/// ConfigError naming the value for unknown experiments.
ExperimentKind experiment_from_name(const std::string& name);
const char* experiment_name(ExperimentKind kind);

/// Command-line overrides. Precedence for the output directory:
/// explicit override, then the SCALINGLAB_OUT environment variable, then
/// the config's output_dir, then "out".
struct RunOptions {
    std::string output_dir;
    std::vector<std::uint64_t> seeds;
    int threads = 1;
};

/// Validates the config strictly (unknown experiments, unknown keys and
/// unwritable output directories are distinct errors naming the offender),
/// executes the experiment across seeds, and writes one CSV per series plus
/// a manifest that is itself a runnable config. Returns the written paths.
/// Reruns with identical configs produce byte-identical CSVs.
std::vector<std::string> run_experiment(const Config& config, const RunOptions& options = {});
std::vector<std::string> run_experiment_file(const std::string& config_path,
                                             const RunOptions& options = {});

/// Default seed list used when a config does not name one.
const std::vector<std::uint64_t>& default_seeds();

}  // namespace scalinglab::harness
