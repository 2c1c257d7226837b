#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scalinglab/nn/dataset.hpp"
#include "scalinglab/nn/mlp.hpp"

namespace scalinglab::nn {

struct TrainConfig {
    int epochs = 100;
    int batch_size = 32;
    double learning_rate = 0.01;
    std::uint64_t seed = 0;  // shuffle stream; one sub-stream per epoch
    int eval_every = 1;      // epochs between logged evaluations
};

/// Per-epoch record of one seeded run. Train/test MSE are logged before
/// training (epoch 0), every eval_every epochs, and at the final epoch.
struct TrainingTrace {
    std::vector<int> epochs_logged;
    std::vector<double> train_mse;
    std::vector<double> test_mse;
    std::uint64_t final_model_digest = 0;
    TrainConfig config;
    std::string init_scheme;  // echoed from the model
};

/// Shuffled minibatch SGD on the mean squared error between the network
/// output and the one-hot labels (mean over both samples and output
/// coordinates). The final partial batch is kept. Single-threaded and
/// bit-deterministic given the model and config seeds; throws
/// DivergenceError with the failing epoch on non-finite loss.
TrainingTrace train_sgd(MlpModel& model, const Dataset& train, const Dataset& test,
                        const TrainConfig& cfg);

}  // namespace scalinglab::nn
