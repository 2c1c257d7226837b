#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "experiment_util.hpp"
#include "scalinglab/harness/config.hpp"
#include "scalinglab/harness/csv.hpp"
#include "scalinglab/harness/parallel.hpp"
#include "scalinglab/harness/series.hpp"
#include "scalinglab/harness/svg.hpp"
#include "scalinglab/nn/dataset.hpp"
#include "scalinglab/nn/mlp.hpp"
#include "scalinglab/nn/train.hpp"
#include "scalinglab/rng.hpp"
#include "scalinglab/scale_time.hpp"

namespace scalinglab::harness {

using detail::DriverContext;
using detail::Params;

namespace {

struct NnData {
    nn::Dataset train;
    nn::Dataset test;
};

/// Shared dataset knobs for the three desk-scale experiments. Synthetic
/// train/test halves come from one pool so both see the same clusters.
struct NnDataParams {
    std::string dataset;
    int classes = 10, dim = 64;
    int train_n = 2000, test_n = 2000;
    double spread = 0.12;
    std::uint64_t data_seed = 424242;
    std::string train_images, train_labels, test_images, test_labels;

    static NnDataParams read(Params& params) {
        NnDataParams d;
        d.dataset = params.gets("dataset", "synthetic");
        d.classes = static_cast<int>(params.geti("classes", 10));
        d.dim = static_cast<int>(params.geti("dim", 64));
        d.train_n = static_cast<int>(params.geti("train_n", 2000));
        d.test_n = static_cast<int>(params.geti("test_n", 2000));
        d.spread = params.getd("spread", 0.12);
        d.data_seed = static_cast<std::uint64_t>(params.geti("data_seed", 424242));
        d.train_images = params.gets("train_images", "");
        d.train_labels = params.gets("train_labels", "");
        d.test_images = params.gets("test_images", "");
        d.test_labels = params.gets("test_labels", "");
        return d;
    }

    NnData load() const {
        if (dataset == "synthetic") {
            const nn::Dataset pool =
                nn::generate_synthetic(classes, dim, train_n + test_n, spread, data_seed);
            return {nn::slice(pool, 0, train_n), nn::slice(pool, train_n, test_n)};
        }
        if (dataset == "idx") {
            nn::Dataset train = nn::load_idx(train_images, train_labels);
            nn::Dataset test = nn::load_idx(test_images, test_labels);
            if (train_n < train.n) train = nn::subsample(train, train_n, derive_seed(data_seed, 1));
            if (test_n < test.n) test = nn::subsample(test, test_n, derive_seed(data_seed, 2));
            return {std::move(train), std::move(test)};
        }
        throw ConfigError("unknown dataset '" + dataset + "'", "dataset");
    }
};

struct RunResult {
    double scale = 0;
    std::uint64_t seed = 0;
    long width_scale = 0;
    nn::TrainingTrace trace;
};

scale_time::MeasuredCurve curve_from_trace(const nn::TrainingTrace& trace, double scale) {
    scale_time::MeasuredCurve curve;
    curve.scale = scale;
    for (std::size_t i = 0; i < trace.epochs_logged.size(); ++i) {
        curve.times.push_back(static_cast<double>(trace.epochs_logged[i]));
        curve.train_error.push_back(trace.train_mse[i]);
        curve.test_error.push_back(trace.test_mse[i]);
    }
    return curve;
}

void write_trace_csv(const nn::TrainingTrace& trace, const std::string& path) {
    Table table;
    table.columns = {"epoch", "train_mse", "test_mse"};
    for (std::size_t i = 0; i < trace.epochs_logged.size(); ++i) {
        table.rows.push_back({std::to_string(trace.epochs_logged[i]),
                              format_double(trace.train_mse[i]),
                              format_double(trace.test_mse[i])});
    }
    write_table(table, path);
}

double mean_of(const std::vector<double>& values) {
    double sum = 0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double se_of(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double mean = mean_of(values);
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (values.size() - 1.0)) / std::sqrt(static_cast<double>(values.size()));
}

}  // namespace

// ---------------------------------------------------------------------------
// nn-tradeoff: min epochs to an error threshold vs width, across seeds.
// ---------------------------------------------------------------------------

void run_nn_tradeoff(const Config& config, Config& resolved, DriverContext& ctx) {
    Params params(config, resolved, "nn-tradeoff");
    const NnDataParams data_params = NnDataParams::read(params);
    const auto width_scales = params.getil("width_scales", {1, 2, 5});
    const int epochs = static_cast<int>(params.geti("epochs", 100));
    const int batch_size = static_cast<int>(params.geti("batch_size", 32));
    const double learning_rate = params.getd("learning_rate", 0.01);
    const double threshold = params.getd("threshold", 0.09);
    const int eval_every = static_cast<int>(params.geti("eval_every", 1));
    const double noise_fraction = params.getd("noise_fraction", 0.0);
    params.reject_unknown();

    const NnData data = data_params.load();

    struct Job {
        long s;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (long s : width_scales) {
        for (std::uint64_t seed : ctx.seeds) jobs.push_back({s, seed});
    }
    std::vector<RunResult> results(jobs.size());

    parallel_for_index(jobs.size(), ctx.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        nn::Dataset train = data.train;
        if (noise_fraction > 0) {
            train = nn::corrupt_labels(train, noise_fraction, derive_seed(job.seed, 0x33));
        }
        nn::MlpModel model = nn::build_mlp(train.d, static_cast<int>(job.s), train.k,
                                           derive_seed(job.seed, 0x11, job.s));
        nn::TrainConfig cfg;
        cfg.epochs = epochs;
        cfg.batch_size = batch_size;
        cfg.learning_rate = learning_rate;
        cfg.eval_every = eval_every;
        cfg.seed = derive_seed(job.seed, 0x44, job.s);
        RunResult result;
        result.width_scale = job.s;
        result.seed = job.seed;
        result.scale = scale_time::effective_params(model.param_count());
        result.trace = nn::train_sgd(model, train, data.test, cfg);
        results[i] = std::move(result);
    });

    std::vector<scale_time::MeasuredCurve> curves;
    for (const auto& result : results) {
        std::ostringstream name;
        name << "trace_s" << result.width_scale << "_seed" << result.seed << ".csv";
        write_trace_csv(result.trace, ctx.emit_path(name.str()));
        curves.push_back(curve_from_trace(result.trace, result.scale));
    }

    const auto tradeoff =
        scale_time::tradeoff_from_runs(curves, threshold, scale_time::Channel::Test);
    emit_csv(tradeoff, ctx.emit_path("tradeoff.csv"));

    Table slopes;
    slopes.columns = {"threshold", "slope", "intercept", "r_squared", "n_points"};
    try {
        const auto fit = scale_time::loglog_slope(tradeoff);
        slopes.rows.push_back({format_double(threshold), format_double(fit.slope),
                               format_double(fit.intercept), format_double(fit.r_squared),
                               std::to_string(fit.n_points)});
    } catch (const std::invalid_argument&) {
        slopes.rows.push_back({format_double(threshold), "nan", "nan", "nan", "0"});
    }
    write_table(slopes, ctx.emit_path("slope.csv"));

    detail::emit_tradeoff_svg({tradeoff}, {"test MSE " + format_double(threshold)}, ctx,
                              "tradeoff.svg");
}

// ---------------------------------------------------------------------------
// nn-data-scan: final error vs training set size for small and large widths.
// ---------------------------------------------------------------------------

void run_nn_data_scan(const Config& config, Config& resolved, DriverContext& ctx) {
    Params params(config, resolved, "nn-data-scan");
    const NnDataParams data_params = NnDataParams::read(params);
    const auto width_scales = params.getil("width_scales", {1, 5});
    const auto volumes = params.getil("volumes", {100, 200, 500, 1000, 2000});
    const int epochs = static_cast<int>(params.geti("epochs", 20));
    const int batch_size = static_cast<int>(params.geti("batch_size", 32));
    const double learning_rate = params.getd("learning_rate", 0.01);
    const double threshold = params.getd("threshold", 0.09);
    params.reject_unknown();

    const NnData data = data_params.load();
    for (long v : volumes) {
        if (v < 1 || v > data.train.n) {
            throw ConfigError("volume " + std::to_string(v) + " exceeds the training pool",
                              "volumes");
        }
    }

    struct Job {
        long s;
        long volume;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (long s : width_scales) {
        for (long v : volumes) {
            for (std::uint64_t seed : ctx.seeds) jobs.push_back({s, v, seed});
        }
    }
    struct Final {
        double train_mse = 0, test_mse = 0;
    };
    std::vector<Final> finals(jobs.size());

    parallel_for_index(jobs.size(), ctx.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        nn::Dataset train = nn::subsample(data.train, static_cast<int>(job.volume),
                                          derive_seed(job.seed, 0x55, job.volume));
        nn::MlpModel model = nn::build_mlp(train.d, static_cast<int>(job.s), train.k,
                                           derive_seed(job.seed, 0x11, job.s));
        nn::TrainConfig cfg;
        cfg.epochs = epochs;
        cfg.batch_size = batch_size;
        cfg.learning_rate = learning_rate;
        cfg.eval_every = std::max(1, epochs);  // only the final point matters here
        cfg.seed = derive_seed(job.seed, 0x44, job.s);
        const auto trace = nn::train_sgd(model, train, data.test, cfg);
        finals[i] = {trace.train_mse.back(), trace.test_mse.back()};
    });

    // data_scan.csv: aggregate per (s, volume).
    Table table;
    table.columns = {"s", "n", "train_mse_mean", "train_mse_se", "test_mse_mean", "test_mse_se"};
    std::map<std::pair<long, long>, std::vector<Final>> grouped;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        grouped[{jobs[i].s, jobs[i].volume}].push_back(finals[i]);
    }
    for (const auto& [key, group] : grouped) {
        std::vector<double> train_values, test_values;
        for (const auto& f : group) {
            train_values.push_back(f.train_mse);
            test_values.push_back(f.test_mse);
        }
        table.rows.push_back({std::to_string(key.first), std::to_string(key.second),
                              format_double(mean_of(train_values)), format_double(se_of(train_values)),
                              format_double(mean_of(test_values)), format_double(se_of(test_values))});
    }
    write_table(table, ctx.emit_path("data_scan.csv"));

    // min_data.csv: per (s, seed), the smallest volume whose final test MSE
    // beats the threshold.
    Table min_data;
    min_data.columns = {"s", "seed", "min_volume", "censored"};
    for (long s : width_scales) {
        for (std::uint64_t seed : ctx.seeds) {
            std::optional<long> best;
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                if (jobs[i].s != s || jobs[i].seed != seed) continue;
                if (finals[i].test_mse < threshold) {
                    if (!best || jobs[i].volume < *best) best = jobs[i].volume;
                }
            }
            min_data.rows.push_back({std::to_string(s), std::to_string(seed),
                                     best ? std::to_string(*best) : "nan", best ? "0" : "1"});
        }
    }
    write_table(min_data, ctx.emit_path("min_data.csv"));
}

// ---------------------------------------------------------------------------
// nn-noise-scan: error curves with and without label noise, per width.
// ---------------------------------------------------------------------------

void run_nn_noise_scan(const Config& config, Config& resolved, DriverContext& ctx) {
    Params params(config, resolved, "nn-noise-scan");
    const NnDataParams data_params = NnDataParams::read(params);
    const auto width_scales = params.getil("width_scales", {1, 2, 5});
    const auto noise_fractions = params.getdl("noise_fractions", {0.0, 0.2});
    const int epochs = static_cast<int>(params.geti("epochs", 60));
    const int batch_size = static_cast<int>(params.geti("batch_size", 32));
    const double learning_rate = params.getd("learning_rate", 0.01);
    const int eval_every = static_cast<int>(params.geti("eval_every", 2));
    params.reject_unknown();

    const NnData data = data_params.load();

    struct Job {
        long s;
        double fraction;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (long s : width_scales) {
        for (double f : noise_fractions) {
            for (std::uint64_t seed : ctx.seeds) jobs.push_back({s, f, seed});
        }
    }
    std::vector<nn::TrainingTrace> traces(jobs.size());

    parallel_for_index(jobs.size(), ctx.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        nn::Dataset train = data.train;
        if (job.fraction > 0) {
            train = nn::corrupt_labels(train, job.fraction, derive_seed(job.seed, 0x33));
        }
        nn::MlpModel model = nn::build_mlp(train.d, static_cast<int>(job.s), train.k,
                                           derive_seed(job.seed, 0x11, job.s));
        nn::TrainConfig cfg;
        cfg.epochs = epochs;
        cfg.batch_size = batch_size;
        cfg.learning_rate = learning_rate;
        cfg.eval_every = eval_every;
        cfg.seed = derive_seed(job.seed, 0x44, job.s);
        traces[i] = nn::train_sgd(model, train, data.test, cfg);
    });

    // Aggregated test-error curve per (s, fraction).
    std::vector<AggregateSeries> all_series;
    Table final_table;
    final_table.columns = {"s", "noise_fraction", "final_test_mse_mean", "final_test_mse_se"};
    for (long s : width_scales) {
        for (double f : noise_fractions) {
            std::vector<SeedSeries> per_seed;
            std::vector<double> final_values;
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                if (jobs[i].s != s || jobs[i].fraction != f) continue;
                SeedSeries series;
                for (std::size_t k = 0; k < traces[i].epochs_logged.size(); ++k) {
                    series.x.push_back(static_cast<double>(traces[i].epochs_logged[k]));
                    series.y.push_back(traces[i].test_mse[k]);
                }
                final_values.push_back(traces[i].test_mse.back());
                per_seed.push_back(std::move(series));
            }
            std::ostringstream label;
            label << "s" << s << " noise " << f;
            auto aggregate = aggregate_seeds(per_seed, label.str());
            std::ostringstream name;
            name << "noise_curve_s" << s << "_f" << static_cast<int>(std::lround(f * 100)) << ".csv";
            emit_csv(aggregate, ctx.emit_path(name.str()));
            all_series.push_back(std::move(aggregate));

            final_table.rows.push_back({std::to_string(s), format_double(f),
                                        format_double(mean_of(final_values)),
                                        format_double(se_of(final_values))});
        }
    }
    write_table(final_table, ctx.emit_path("noise_final.csv"));

    try {
        AxesSpec axes;
        axes.x_label = "epoch";
        axes.y_label = "test MSE";
        const std::string path = detail::join_path(ctx.out_dir, "noise.svg");
        emit_svg_plot(all_series, axes, path);
        ctx.written.push_back(path);
    } catch (const std::invalid_argument&) {
    }
}

}  // namespace scalinglab::harness
