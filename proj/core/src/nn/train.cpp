#include "scalinglab/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scalinglab/errors.hpp"
#include "scalinglab/rng.hpp"

namespace scalinglab::nn {

namespace {

// Workspace for one backpropagation pass; sized for the largest batch seen.
struct BackpropScratch {
    std::vector<std::vector<double>> post;   // post-activation per hidden layer
    std::vector<double> output;              // batch x out
    std::vector<double> delta_a, delta_b;    // ping-pong deltas
    std::vector<std::vector<double>> grad_w;
    std::vector<std::vector<double>> grad_b;
};

// One SGD step on a batch; returns the batch MSE (mean over batch * k).
double sgd_step(MlpModel& model, const double* inputs, const double* targets, int count, double lr,
                BackpropScratch& ws) {
    const int layers = model.layers();
    const int out_dim = model.out_dim();

    // Forward, keeping post-activations.
    ws.post.resize(layers - 1);
    const double* current = inputs;
    int current_dim = model.in_dim();
    for (int l = 0; l < layers; ++l) {
        const int width = model.layer_widths[l + 1];
        const bool last = l == layers - 1;
        std::vector<double>& dst_store = last ? ws.output : ws.post[l];
        dst_store.resize(static_cast<std::size_t>(count) * width);
        double* dst = dst_store.data();
        for (int s = 0; s < count; ++s) {
            const double* x = current + static_cast<std::size_t>(s) * current_dim;
            double* y = dst + static_cast<std::size_t>(s) * width;
            for (int o = 0; o < width; ++o) {
                const double* row = model.weights[l].data() + static_cast<std::size_t>(o) * current_dim;
                double acc = model.biases[l][o];
                for (int j = 0; j < current_dim; ++j) acc += row[j] * x[j];
                y[o] = acc;
            }
        }
        if (!last && model.activation == Activation::Rectifier) {
            const std::size_t total = static_cast<std::size_t>(count) * width;
            for (std::size_t i = 0; i < total; ++i) {
                if (dst[i] < 0) dst[i] = 0;
            }
        }
        current = dst;
        current_dim = width;
    }

    // Loss and output delta: d/dout of mean_{batch,k} (out - y)^2.
    const double inv = 1.0 / (static_cast<double>(count) * static_cast<double>(out_dim));
    double loss = 0.0;
    ws.delta_a.resize(static_cast<std::size_t>(count) * out_dim);
    for (std::size_t i = 0; i < ws.delta_a.size(); ++i) {
        const double r = ws.output[i] - targets[i];
        loss += r * r;
        ws.delta_a[i] = 2.0 * r * inv;
    }
    loss *= inv;

    // Backward. delta starts at the output layer and walks to the input.
    ws.grad_w.resize(layers);
    ws.grad_b.resize(layers);
    std::vector<double>* delta = &ws.delta_a;
    std::vector<double>* delta_prev = &ws.delta_b;
    for (int l = layers - 1; l >= 0; --l) {
        const int in = model.layer_widths[l];
        const int out = model.layer_widths[l + 1];
        const double* prev_act = l == 0 ? inputs : ws.post[l - 1].data();

        ws.grad_w[l].assign(static_cast<std::size_t>(in) * out, 0.0);
        ws.grad_b[l].assign(out, 0.0);
        for (int s = 0; s < count; ++s) {
            const double* d = delta->data() + static_cast<std::size_t>(s) * out;
            const double* a = prev_act + static_cast<std::size_t>(s) * in;
            for (int o = 0; o < out; ++o) {
                const double coef = d[o];
                if (coef == 0.0) continue;
                double* gw = ws.grad_w[l].data() + static_cast<std::size_t>(o) * in;
                for (int j = 0; j < in; ++j) gw[j] += coef * a[j];
                ws.grad_b[l][o] += coef;
            }
        }

        if (l > 0) {
            delta_prev->assign(static_cast<std::size_t>(count) * in, 0.0);
            for (int s = 0; s < count; ++s) {
                const double* d = delta->data() + static_cast<std::size_t>(s) * out;
                double* dp = delta_prev->data() + static_cast<std::size_t>(s) * in;
                for (int o = 0; o < out; ++o) {
                    const double coef = d[o];
                    if (coef == 0.0) continue;
                    const double* row = model.weights[l].data() + static_cast<std::size_t>(o) * in;
                    for (int j = 0; j < in; ++j) dp[j] += coef * row[j];
                }
                if (model.activation == Activation::Rectifier) {
                    const double* act = ws.post[l - 1].data() + static_cast<std::size_t>(s) * in;
                    for (int j = 0; j < in; ++j) {
                        if (act[j] <= 0.0) dp[j] = 0.0;
                    }
                }
            }
            std::swap(delta, delta_prev);
        }
    }

    for (int l = 0; l < layers; ++l) {
        double* w = model.weights[l].data();
        const double* gw = ws.grad_w[l].data();
        for (std::size_t i = 0; i < ws.grad_w[l].size(); ++i) w[i] -= lr * gw[i];
        double* b = model.biases[l].data();
        const double* gb = ws.grad_b[l].data();
        for (std::size_t i = 0; i < ws.grad_b[l].size(); ++i) b[i] -= lr * gb[i];
    }
    return loss;
}

}  // namespace

TrainingTrace train_sgd(MlpModel& model, const Dataset& train, const Dataset& test,
                        const TrainConfig& cfg) {
    model.validate();
    train.validate();
    test.validate();
    if (train.d != model.in_dim() || train.k != model.out_dim() || test.d != train.d ||
        test.k != train.k) {
        throw std::invalid_argument("train_sgd: dataset/model shapes inconsistent");
    }
    if (cfg.epochs < 0 || cfg.batch_size < 1 || cfg.eval_every < 1) {
        throw std::invalid_argument("train_sgd: bad config");
    }

    TrainingTrace trace;
    trace.config = cfg;
    trace.init_scheme = model.init_scheme;

    auto log_point = [&](int epoch) {
        trace.epochs_logged.push_back(epoch);
        trace.train_mse.push_back(evaluate_mse(model, train));
        trace.test_mse.push_back(evaluate_mse(model, test));
    };
    log_point(0);

    BackpropScratch ws;
    std::vector<int> order(train.n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> batch_in(static_cast<std::size_t>(cfg.batch_size) * train.d);
    std::vector<double> batch_label(static_cast<std::size_t>(cfg.batch_size) * train.k);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Fisher-Yates with a per-epoch stream, so epoch e is reproducible
        // regardless of how earlier epochs consumed randomness.
        Rng shuffle_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
        for (int i = train.n - 1; i > 0; --i) {
            const int j = static_cast<int>(shuffle_rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[i], order[j]);
        }

        for (int start = 0; start < train.n; start += cfg.batch_size) {
            const int count = std::min(cfg.batch_size, train.n - start);  // partial batch kept
            for (int s = 0; s < count; ++s) {
                const int src = order[start + s];
                std::copy_n(train.input_row(src), train.d,
                            batch_in.data() + static_cast<std::size_t>(s) * train.d);
                std::copy_n(train.label_row(src), train.k,
                            batch_label.data() + static_cast<std::size_t>(s) * train.k);
            }
            const double loss =
                sgd_step(model, batch_in.data(), batch_label.data(), count, cfg.learning_rate, ws);
            if (!std::isfinite(loss)) {
                std::ostringstream msg;
                msg << "training diverged (non-finite loss) at epoch " << epoch;
                throw DivergenceError(msg.str(), static_cast<double>(epoch));
            }
        }

        if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
            log_point(epoch);
        }
    }

    trace.final_model_digest = model_digest(model);
    return trace;
}

}  // namespace scalinglab::nn
