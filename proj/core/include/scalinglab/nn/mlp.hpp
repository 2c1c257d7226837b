#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scalinglab/nn/dataset.hpp"

namespace scalinglab::nn {

enum class Activation {
    Rectifier,  // max(0, x) on all but the final layer
    Identity,   // linear network; used by the degenerate/linear checks
};

/// A plain fully connected network. Weights are row-major (out x in) per
/// layer; the final layer has no activation.
struct MlpModel {
    std::vector<int> layer_widths;             // node counts, layers() + 1 entries
    std::vector<std::vector<double>> weights;  // [layer], out*in
    std::vector<std::vector<double>> biases;   // [layer], out
    Activation activation = Activation::Rectifier;
    std::uint64_t seed = 0;
    std::string init_scheme;

    int layers() const { return static_cast<int>(weights.size()); }
    int in_dim() const { return layer_widths.front(); }
    int out_dim() const { return layer_widths.back(); }
    long long param_count() const;

    void validate() const;  // shape chain consistency
};

/// Six affine layers with hidden width 10 * width_scale. Weights drawn from
/// a zero-mean normal with variance 2 / fan_in, biases zero; bit-identical
/// for identical seeds.
MlpModel build_mlp(int in_dim, int width_scale, int out_dim, std::uint64_t seed);

/// Forward pass for `count` rows stored contiguously at `inputs`
/// (count x in_dim, row-major); outputs written to `outputs`
/// (count x out_dim). Scratch grows as needed and may be reused across calls.
struct ForwardScratch {
    std::vector<std::vector<double>> post;  // post-activation per layer
};
void forward(const MlpModel& model, const double* inputs, int count, double* outputs,
             ForwardScratch& scratch);

/// Mean over samples and output coordinates of the squared residual against
/// the one-hot labels.
double evaluate_mse(const MlpModel& model, const Dataset& ds);

/// FNV-1a over the weight and bias bit patterns; identifies a model state.
std::uint64_t model_digest(const MlpModel& model);

}  // namespace scalinglab::nn
