#include "scalinglab/nn/mlp.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "scalinglab/rng.hpp"
#include "scalinglab/scale_time.hpp"

namespace scalinglab::nn {

long long MlpModel::param_count() const {
    long long count = 0;
    for (int l = 0; l < layers(); ++l) {
        count += static_cast<long long>(weights[l].size()) + static_cast<long long>(biases[l].size());
    }
    return count;
}

void MlpModel::validate() const {
    if (layer_widths.size() != weights.size() + 1 || weights.size() != biases.size()) {
        throw std::invalid_argument("MlpModel: layer bookkeeping inconsistent");
    }
    for (int l = 0; l < layers(); ++l) {
        const std::size_t in = static_cast<std::size_t>(layer_widths[l]);
        const std::size_t out = static_cast<std::size_t>(layer_widths[l + 1]);
        if (weights[l].size() != in * out || biases[l].size() != out) {
            throw std::invalid_argument("MlpModel: layer shapes do not chain");
        }
    }
}

MlpModel build_mlp(int in_dim, int width_scale, int out_dim, std::uint64_t seed) {
    if (in_dim < 1 || width_scale < 1 || out_dim < 1) {
        throw std::invalid_argument("build_mlp: dimensions and width scale must be >= 1");
    }
    const int width = 10 * width_scale;
    const int depth = 6;

    MlpModel model;
    model.seed = seed;
    model.activation = Activation::Rectifier;
    model.init_scheme = "hidden weights normal(0, 2/fan_in), readout 0, biases 0";
    model.layer_widths.push_back(in_dim);
    for (int l = 0; l < depth - 1; ++l) model.layer_widths.push_back(width);
    model.layer_widths.push_back(out_dim);

    // Rectifier-friendly hidden init; the readout starts at zero so every
    // model's first prediction is the zero vector regardless of width, and
    // time-to-generalization comparisons start from a common state.
    Rng rng(seed);
    for (int l = 0; l < depth; ++l) {
        const int in = model.layer_widths[l];
        const int out = model.layer_widths[l + 1];
        std::vector<double> w(static_cast<std::size_t>(in) * out, 0.0);
        if (l < depth - 1) {
            const double stddev = std::sqrt(2.0 / static_cast<double>(in));
            for (double& v : w) v = stddev * rng.gaussian();
        }
        model.weights.push_back(std::move(w));
        model.biases.emplace_back(out, 0.0);
    }

    if (model.param_count() != scale_time::mlp_param_count(in_dim, width, depth, out_dim)) {
        throw std::logic_error("build_mlp: parameter count mismatch");
    }
    return model;
}

namespace {

void affine_forward(const std::vector<double>& w, const std::vector<double>& b, const double* in,
                    int count, int in_dim, int out_dim, double* out) {
    for (int s = 0; s < count; ++s) {
        const double* x = in + static_cast<std::size_t>(s) * in_dim;
        double* y = out + static_cast<std::size_t>(s) * out_dim;
        for (int o = 0; o < out_dim; ++o) {
            const double* row = w.data() + static_cast<std::size_t>(o) * in_dim;
            double acc = b[o];
            for (int j = 0; j < in_dim; ++j) acc += row[j] * x[j];
            y[o] = acc;
        }
    }
}

}  // namespace

void forward(const MlpModel& model, const double* inputs, int count, double* outputs,
             ForwardScratch& scratch) {
    const int layers = model.layers();
    scratch.post.resize(layers);

    const double* current = inputs;
    int current_dim = model.in_dim();
    for (int l = 0; l < layers; ++l) {
        const int out_dim = model.layer_widths[l + 1];
        const bool last = l == layers - 1;
        double* dst;
        if (last) {
            dst = outputs;
        } else {
            scratch.post[l].resize(static_cast<std::size_t>(count) * out_dim);
            dst = scratch.post[l].data();
        }
        affine_forward(model.weights[l], model.biases[l], current, count, current_dim, out_dim, dst);
        if (!last && model.activation == Activation::Rectifier) {
            const std::size_t total = static_cast<std::size_t>(count) * out_dim;
            for (std::size_t i = 0; i < total; ++i) {
                if (dst[i] < 0) dst[i] = 0;
            }
        }
        current = dst;
        current_dim = out_dim;
    }
}

double evaluate_mse(const MlpModel& model, const Dataset& ds) {
    if (ds.d != model.in_dim() || ds.k != model.out_dim()) {
        throw std::invalid_argument("evaluate_mse: dataset/model shape mismatch");
    }
    constexpr int kChunk = 256;
    ForwardScratch scratch;
    std::vector<double> out(static_cast<std::size_t>(kChunk) * ds.k);

    double sum = 0.0;
    for (int start = 0; start < ds.n; start += kChunk) {
        const int count = std::min(kChunk, ds.n - start);
        forward(model, ds.input_row(start), count, out.data(), scratch);
        const double* y = ds.label_row(start);
        const std::size_t total = static_cast<std::size_t>(count) * ds.k;
        for (std::size_t i = 0; i < total; ++i) {
            const double r = out[i] - y[i];
            sum += r * r;
        }
    }
    return sum / (static_cast<double>(ds.n) * static_cast<double>(ds.k));
}

std::uint64_t model_digest(const MlpModel& model) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    auto mix = [&hash](const std::vector<double>& values) {
        for (double v : values) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof(bits));
            for (int byte = 0; byte < 8; ++byte) {
                hash ^= (bits >> (8 * byte)) & 0xffull;
                hash *= 0x100000001b3ull;
            }
        }
    };
    for (int l = 0; l < model.layers(); ++l) {
        mix(model.weights[l]);
        mix(model.biases[l]);
    }
    return hash;
}

}  // namespace scalinglab::nn
