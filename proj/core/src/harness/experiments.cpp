#include "scalinglab/harness/experiments.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "experiment_util.hpp"
#include "scalinglab/harness/csv.hpp"
#include "scalinglab/harness/series.hpp"
#include "scalinglab/harness/svg.hpp"
#include "scalinglab/linear_model.hpp"
#include "scalinglab/rng.hpp"
#include "scalinglab/scale_time.hpp"
#include "scalinglab/subspace_model.hpp"

namespace scalinglab::harness {

using detail::DriverContext;
using detail::Params;

namespace {

struct NameKind {
    const char* name;
    ExperimentKind kind;
};
constexpr NameKind kExperiments[] = {
    {"subspace-verify", ExperimentKind::SubspaceVerify},
    {"linear-tradeoff", ExperimentKind::LinearTradeoff},
    {"ddcurve", ExperimentKind::DdCurve},
    {"predict", ExperimentKind::Predict},
    {"nn-tradeoff", ExperimentKind::NnTradeoff},
    {"nn-data-scan", ExperimentKind::NnDataScan},
    {"nn-noise-scan", ExperimentKind::NnNoiseScan},
};

// Plots are a courtesy; CSVs are the contract. A plot that cannot be drawn
// (say, log axes over a zero value) must not fail the run.
template <typename Fn>
void try_plot(Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument&) {
    }
}

// ---------------------------------------------------------------------------
// subspace-verify
// ---------------------------------------------------------------------------

void run_subspace_verify(const Config& config, Config& resolved, DriverContext& ctx) {
    Params params(config, resolved, "subspace-verify");
    const int P = static_cast<int>(params.geti("ambient_dim", 200));
    const int r = static_cast<int>(params.geti("projection_dim", 3));
    const auto p_list = params.getil("p_list", {10, 20, 40});
    const double eta = params.getd("learning_rate", 0.05);
    const double failure_prob = params.getd("failure_prob", 0.1);
    const int trials = static_cast<int>(params.geti("trials", 40));
    const double exponent_target = params.getd("exponent_target", 2.0);
    const double dt_safety = params.getd("dt_safety", 0.02);
    const int frobenius_trials = static_cast<int>(params.geti("frobenius_trials", 0));
    const auto frobenius_p_list = params.getil("frobenius_p_list", {2, 8, 32});
    const int frobenius_r = static_cast<int>(params.geti("frobenius_r", 3));
    const int frobenius_cols = static_cast<int>(params.geti("frobenius_cols", 8));
    params.reject_unknown();

    // rate[p][seed]; ratio likewise.
    std::map<long, std::vector<double>> rates, ratios;
    for (std::uint64_t seed : ctx.seeds) {
        Rng problem_rng(derive_seed(seed, 0xA11));
        Eigen::MatrixXd K(r, P);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < P; ++j) K(i, j) = problem_rng.gaussian();
        Eigen::VectorXd beta0(P);
        for (int j = 0; j < P; ++j) beta0(j) = problem_rng.gaussian();
        Eigen::VectorXd target(r);
        for (int i = 0; i < r; ++i) target(i) = problem_rng.gaussian();

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
        const double opnorm = svd.singularValues()(0) * svd.singularValues()(0);
        const double h = 2.0;

        for (long p : p_list) {
            subspace::SubspaceSpec spec;
            spec.ambient_dim = P;
            spec.projection_dim = r;
            spec.controllable_dim = static_cast<int>(p);
            spec.learning_rate = eta;
            spec.projection = K;
            spec.beta0 = beta0;
            subspace::LossSpec loss;
            loss.quadratic.target = target;

            const double horizon = exponent_target / (eta * static_cast<double>(p) * h * opnorm);
            const double dt = subspace::stable_dt(eta, static_cast<int>(p), h, opnorm, dt_safety);
            const auto report = subspace::bound_violation_rate(
                spec, loss, horizon, dt, trials, failure_prob, derive_seed(seed, 0xB0B, p));
            rates[p].push_back(report.rate);
            double worst = 0;
            for (const auto& record : report.records) {
                worst = std::max(worst, record.max_bound_ratio);
            }
            ratios[p].push_back(worst);
        }
    }

    Table table;
    table.columns = {"p", "rate_mean", "rate_se", "trials", "n_seeds", "max_ratio_mean"};
    for (long p : p_list) {
        const auto& rs = rates[p];
        double mean = 0;
        for (double v : rs) mean += v;
        mean /= static_cast<double>(rs.size());
        double se = 0;
        if (rs.size() >= 2) {
            double ss = 0;
            for (double v : rs) ss += (v - mean) * (v - mean);
            se = std::sqrt(ss / (rs.size() - 1.0)) / std::sqrt(static_cast<double>(rs.size()));
        }
        double ratio_mean = 0;
        for (double v : ratios[p]) ratio_mean += v;
        ratio_mean /= static_cast<double>(ratios[p].size());
        table.rows.push_back({std::to_string(p), format_double(mean), format_double(se),
                              std::to_string(trials), std::to_string(ctx.seeds.size()),
                              format_double(ratio_mean)});
    }
    write_table(table, ctx.emit_path("violation_rates.csv"));

    if (frobenius_trials > 0) {
        Table frob;
        frob.columns = {"p", "seed", "empirical", "analytic", "rel_err"};
        for (long p : frobenius_p_list) {
            for (std::uint64_t seed : ctx.seeds) {
                Rng krng(derive_seed(seed, 0xF0B));
                Eigen::MatrixXd K(frobenius_r, frobenius_cols);
                for (int i = 0; i < frobenius_r; ++i)
                    for (int j = 0; j < frobenius_cols; ++j) K(i, j) = krng.gaussian();
                const auto stats = subspace::noise_matrix_stats(
                    K, static_cast<int>(p), frobenius_trials, derive_seed(seed, 0xF1B, p));
                const double rel =
                    std::abs(stats.empirical_mean_frob_sq - stats.analytic) / stats.analytic;
                frob.rows.push_back({std::to_string(p), std::to_string(seed),
                                     format_double(stats.empirical_mean_frob_sq),
                                     format_double(stats.analytic), format_double(rel)});
            }
        }
        write_table(frob, ctx.emit_path("frobenius.csv"));
    }
}

// ---------------------------------------------------------------------------
// linear-tradeoff
// ---------------------------------------------------------------------------

void run_linear_tradeoff(const Config& config, Config& resolved, DriverContext& ctx) {
    Params params(config, resolved, "linear-tradeoff");
    subspace::TradeoffExperimentConfig experiment;
    experiment.ambient_dim = static_cast<int>(params.geti("ambient_dim", 1000));
    experiment.projection_dim = static_cast<int>(params.geti("projection_dim", 3));
    experiment.learning_rate = params.getd("learning_rate", 1e-6);
    const auto p_list = params.getil("p_list", {16, 24, 36, 54, 80, 120, 160});
    const auto thresholds = params.getdl("thresholds", {30.0, 3.0, 0.3});
    experiment.thresholds_relative = params.getb("thresholds_relative", false);
    experiment.max_iters = params.geti("max_iters", 100000);
    params.reject_unknown();

    experiment.p_grid.assign(p_list.begin(), p_list.end());
    experiment.loss_thresholds = thresholds;
    experiment.trials = 1;

    // One single-trial run per seed, merged per (threshold, p) across seeds.
    std::vector<std::vector<std::vector<std::optional<double>>>> hits(
        thresholds.size(), std::vector<std::vector<std::optional<double>>>(p_list.size()));
    for (std::uint64_t seed : ctx.seeds) {
        experiment.master_seed = seed;
        const auto curves = subspace::linear_tradeoff_experiment(experiment);
        for (std::size_t ti = 0; ti < curves.size(); ++ti) {
            for (std::size_t pi = 0; pi < curves[ti].points.size(); ++pi) {
                hits[ti][pi].push_back(curves[ti].points[pi].min_time);
            }
        }
    }

    std::vector<scale_time::TradeoffCurve> merged;
    for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
        scale_time::TradeoffCurve curve;
        curve.threshold = thresholds[ti];
        curve.channel = scale_time::Channel::Train;
        for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
            scale_time::TradeoffPoint point;
            point.scale = static_cast<double>(p_list[pi]);
            point.n_runs = static_cast<int>(ctx.seeds.size());
            std::vector<double> reached;
            for (const auto& h : hits[ti][pi]) {
                if (h) {
                    reached.push_back(*h);
                } else {
                    ++point.n_censored;
                }
            }
            if (!reached.empty()) {
                double mean = 0;
                for (double v : reached) mean += v;
                mean /= static_cast<double>(reached.size());
                point.min_time = mean;
                if (reached.size() >= 2) {
                    double ss = 0;
                    for (double v : reached) ss += (v - mean) * (v - mean);
                    point.std_err = std::sqrt(ss / (reached.size() - 1.0)) /
                                    std::sqrt(static_cast<double>(reached.size()));
                    point.has_std_err = true;
                }
            }
            curve.points.push_back(point);
        }
        merged.push_back(std::move(curve));
    }

    Table slopes;
    slopes.columns = {"threshold", "slope", "intercept", "r_squared", "n_points"};
    std::vector<std::string> labels;
    for (std::size_t ti = 0; ti < merged.size(); ++ti) {
        emit_csv(merged[ti], ctx.emit_path("tradeoff_thr" + std::to_string(ti) + ".csv"));
        labels.push_back("threshold " + format_double(thresholds[ti]));
        try {
            const auto fit = scale_time::loglog_slope(merged[ti]);
            slopes.rows.push_back({format_double(thresholds[ti]), format_double(fit.slope),
                                   format_double(fit.intercept), format_double(fit.r_squared),
                                   std::to_string(fit.n_points)});
        } catch (const std::invalid_argument&) {
            slopes.rows.push_back({format_double(thresholds[ti]), "nan", "nan", "nan", "0"});
        }
    }
    write_table(slopes, ctx.emit_path("slopes.csv"));
    detail::emit_tradeoff_svg(merged, labels, ctx, "tradeoff.svg");
}

// ---------------------------------------------------------------------------
// ddcurve
// ---------------------------------------------------------------------------

void run_ddcurve(const Config& config, Config& resolved, DriverContext& ctx) {
    Params params(config, resolved, "ddcurve");
    const std::string axis_name = params.gets("axis", "time");
    const double grid_min = params.getd("grid_min", 0.01);
    const double grid_max = params.getd("grid_max", 100.0);
    const int grid_points = static_cast<int>(params.geti("grid_points", 100));
    const bool grid_log = params.getb("grid_log", true);

    linear::ScanConfig scan;
    scan.n = static_cast<int>(params.geti("n", 30));
    scan.m = static_cast<int>(params.geti("m", 30));
    scan.prior.teacher_scale = params.getd("teacher_scale", 1.0);
    scan.prior.noise_scale = params.getd("noise_scale", 1.0);
    scan.eta = params.getd("eta", 1.0);
    scan.scale = params.getd("scale", 1.0);
    scan.time = params.getd("time", 1.0);
    const auto sigma = params.getdl("sigma", {});
    params.reject_unknown();

    if (axis_name == "time") {
        scan.axis = linear::Axis::Time;
    } else if (axis_name == "scale") {
        scan.axis = linear::Axis::Scale;
    } else if (axis_name == "data") {
        scan.axis = linear::Axis::Data;
    } else {
        throw ConfigError("unknown axis '" + axis_name + "'", "axis");
    }
    scan.grid = grid_log ? detail::log_grid(grid_min, grid_max, grid_points)
                         : detail::lin_grid(grid_min, grid_max, grid_points);
    if (scan.axis == linear::Axis::Data) {
        for (double& g : scan.grid) g = std::max(1.0, std::round(g));
        scan.grid.erase(std::unique(scan.grid.begin(), scan.grid.end()), scan.grid.end());
    }
    scan.spectrum.explicit_sigma = sigma;

    const bool sampled = sigma.empty();
    const std::vector<std::uint64_t> seeds = sampled ? ctx.seeds : std::vector<std::uint64_t>{0};

    std::vector<SeedSeries> totals, signals, noises;
    for (std::uint64_t seed : seeds) {
        linear::ScanConfig per_seed = scan;
        per_seed.spectrum.seeds = {seed};
        const auto curve = linear::scan_curve(per_seed);
        totals.push_back({curve.grid, curve.total_sq_error});
        signals.push_back({curve.grid, curve.signal_sq});
        noises.push_back({curve.grid, curve.noise_sq});
    }
    const auto total = aggregate_seeds(totals, "total");
    const auto signal = aggregate_seeds(signals, "signal");
    const auto noise = aggregate_seeds(noises, "noise");

    Table table;
    table.columns = {"x",           "total_mean", "total_se",   "signal_mean",
                     "signal_se",   "noise_mean", "noise_se"};
    for (std::size_t i = 0; i < total.x.size(); ++i) {
        table.rows.push_back({format_double(total.x[i]), format_double(total.mean[i]),
                              format_double(total.std_err[i]), format_double(signal.mean[i]),
                              format_double(signal.std_err[i]), format_double(noise.mean[i]),
                              format_double(noise.std_err[i])});
    }
    write_table(table, ctx.emit_path("curve.csv"));

    try_plot([&]() {
        AxesSpec axes;
        axes.log_x = grid_log;
        axes.x_label = axis_name;
        axes.y_label = "expected squared error";
        const std::string path = detail::join_path(ctx.out_dir, "curve.svg");
        emit_svg_plot({total, signal, noise}, axes, path);
        ctx.written.push_back(path);
    });
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

scale_time::MeasuredCurve load_measured_curve(const std::string& path, double scale) {
    const Table table = read_table(path);
    if (table.columns.size() < 3 || table.columns[0] != "epoch") {
        throw ConfigError("curve file " + path + " must have columns epoch,train_mse,test_mse",
                          "curve_files");
    }
    scale_time::MeasuredCurve curve;
    curve.scale = scale;
    for (const auto& row : table.rows) {
        const double t = std::strtod(row[0].c_str(), nullptr);
        if (!(t > 0)) continue;  // log-time interpolation cannot use epoch 0
        curve.times.push_back(t);
        curve.train_error.push_back(std::strtod(row[1].c_str(), nullptr));
        curve.test_error.push_back(std::strtod(row[2].c_str(), nullptr));
    }
    return curve;
}

void run_predict(const Config& config, Config& resolved, DriverContext& ctx) {
    Params params(config, resolved, "predict");
    const std::string mode = params.gets("mode", "scale");
    const std::string source = params.gets("source", "analytic");

    // Analytic source parameters.
    const int n = static_cast<int>(params.geti("n", 8));
    const int m = static_cast<int>(params.geti("m", 8));
    const auto sigma = params.getdl("sigma", {});
    linear::PriorSpec prior;
    prior.teacher_scale = params.getd("teacher_scale", 1.0);
    prior.noise_scale = params.getd("noise_scale", 0.5);
    const double eta = params.getd("eta", 1.0);
    const double p0 = params.getd("source_scale", 1.0);
    const double t_min = params.getd("t_min", 0.25);
    const double t_max = params.getd("t_max", 16.0);
    const int t_points = static_cast<int>(params.geti("t_points", 512));
    const double target_scale = params.getd("target_scale", 2.0);
    const double t0 = params.getd("t0", 1.0);
    const double scale_min = params.getd("scale_min", 0.25);
    const double scale_max = params.getd("scale_max", 16.0);
    const int scale_points = static_cast<int>(params.geti("scale_points", 512));
    const int target_points = static_cast<int>(params.geti("target_points", 101));

    // CSV source parameters.
    const std::string curve_files = params.gets("curve_files", "");
    const auto curve_scales = params.getdl("curve_scales", {});
    params.reject_unknown();

    Eigen::VectorXd sigma_ext, xv_sq;
    if (source == "analytic") {
        if (!sigma.empty()) {
            sigma_ext = Eigen::VectorXd::Zero(m);
            for (std::size_t i = 0; i < sigma.size() && i < static_cast<std::size_t>(m); ++i) {
                sigma_ext(static_cast<Eigen::Index>(i)) = sigma[i];
            }
        } else {
            const Eigen::MatrixXd X = linear::sample_design(n, m, derive_seed(ctx.seeds.front(), 0x9));
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
            sigma_ext = Eigen::VectorXd::Zero(m);
            for (int i = 0; i < svd.singularValues().size() && i < m; ++i) {
                sigma_ext(i) = svd.singularValues()(i);
            }
        }
        xv_sq = Eigen::VectorXd::Ones(m);
    } else if (source != "csv") {
        throw ConfigError("unknown source '" + source + "'", "source");
    }

    auto analytic_total = [&](double scale, double t) {
        return linear::unified_error(sigma_ext, xv_sq, prior, eta, scale, t).total;
    };

    if (mode == "scale") {
        scale_time::MeasuredCurve curve;
        if (source == "analytic") {
            curve.scale = p0;
            curve.times = detail::log_grid(t_min, t_max, t_points);
            for (double t : curve.times) {
                const double e = analytic_total(p0, t);
                curve.train_error.push_back(e);
                curve.test_error.push_back(e);
            }
        } else {
            if (curve_files.empty() || curve_scales.empty()) {
                throw ConfigError("csv source needs curve_files and curve_scales", "curve_files");
            }
            std::istringstream files(curve_files);
            std::string file;
            std::getline(files, file, ',');
            curve = load_measured_curve(file, curve_scales.front());
        }

        // Targets at the far scale, spanning the remappable window.
        const double lo = curve.times.front() * curve.scale / target_scale * 1.02;
        const double hi = curve.times.back() * curve.scale / target_scale * 0.98;
        std::vector<scale_time::ScaleTarget> targets;
        for (double t : detail::log_grid(lo, hi, target_points)) {
            targets.push_back({target_scale, t});
        }
        const auto predictions = scale_time::predict_across_scale(curve, targets);

        Table table;
        table.columns = {"t1",     "remapped_time", "predicted_train", "predicted_test",
                         "actual", "abs_error",     "clamped"};
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const double actual =
                source == "analytic" ? analytic_total(target_scale, targets[i].time)
                                     : std::numeric_limits<double>::quiet_NaN();
            const double err = source == "analytic"
                                   ? std::abs(predictions[i].predicted_test - actual)
                                   : std::numeric_limits<double>::quiet_NaN();
            table.rows.push_back({format_double(targets[i].time),
                                  format_double(predictions[i].remapped_time),
                                  format_double(predictions[i].predicted_train),
                                  format_double(predictions[i].predicted_test),
                                  format_double(actual), format_double(err),
                                  predictions[i].clamped ? "1" : "0"});
        }
        write_table(table, ctx.emit_path("pred_scale.csv"));
    } else if (mode == "time") {
        std::vector<scale_time::MeasuredCurve> curves;
        if (source == "analytic") {
            for (double scale : detail::log_grid(scale_min, scale_max, scale_points)) {
                scale_time::MeasuredCurve c;
                c.scale = scale;
                c.times = {t0};
                const double e = analytic_total(scale, t0);
                c.train_error = {e};
                c.test_error = {e};
                curves.push_back(std::move(c));
            }
        } else {
            if (curve_files.empty() || curve_scales.empty()) {
                throw ConfigError("csv source needs curve_files and curve_scales", "curve_files");
            }
            std::istringstream files(curve_files);
            std::string file;
            std::size_t index = 0;
            while (std::getline(files, file, ',')) {
                if (index >= curve_scales.size()) {
                    throw ConfigError("curve_files and curve_scales lengths differ", "curve_scales");
                }
                curves.push_back(load_measured_curve(file, curve_scales[index++]));
            }
        }

        double smin = curves.front().scale, smax = curves.front().scale;
        for (const auto& c : curves) {
            smin = std::min(smin, c.scale);
            smax = std::max(smax, c.scale);
        }
        const auto t_grid = detail::log_grid(t0 * smin / target_scale * 1.02,
                                             t0 * smax / target_scale * 0.98, target_points);
        const auto predictions = scale_time::predict_across_time(curves, t0, target_scale, t_grid);

        Table table;
        table.columns = {"t", "source_scale", "predicted_train", "predicted_test", "actual",
                         "abs_error"};
        for (const auto& p : predictions) {
            const double actual = source == "analytic"
                                      ? analytic_total(target_scale, p.time)
                                      : std::numeric_limits<double>::quiet_NaN();
            const double err = source == "analytic" ? std::abs(p.predicted_test - actual)
                                                    : std::numeric_limits<double>::quiet_NaN();
            table.rows.push_back({format_double(p.time), format_double(p.source_scale),
                                  format_double(p.predicted_train), format_double(p.predicted_test),
                                  format_double(actual), format_double(err)});
        }
        write_table(table, ctx.emit_path("pred_time.csv"));
    } else {
        throw ConfigError("unknown mode '" + mode + "'", "mode");
    }
}

}  // namespace

// NN experiment drivers live in experiments_nn.cpp.
void run_nn_tradeoff(const Config&, Config&, DriverContext&);
void run_nn_data_scan(const Config&, Config&, DriverContext&);
void run_nn_noise_scan(const Config&, Config&, DriverContext&);

ExperimentKind experiment_from_name(const std::string& name) {
    for (const auto& e : kExperiments) {
        if (name == e.name) return e.kind;
    }
    throw ConfigError("unknown experiment '" + name + "'", "experiment");
}

const char* experiment_name(ExperimentKind kind) {
    for (const auto& e : kExperiments) {
        if (e.kind == kind) return e.name;
    }
    return "?";
}

const std::vector<std::uint64_t>& default_seeds() {
    static const std::vector<std::uint64_t> seeds = {101, 102, 103, 104, 105};
    return seeds;
}

std::vector<std::string> run_experiment(const Config& config, const RunOptions& options) {
    const auto experiment_value = config.get("", "experiment");
    if (!experiment_value) {
        throw ConfigError("missing 'experiment' key", "experiment");
    }
    const ExperimentKind kind = experiment_from_name(*experiment_value);
    const std::string section = experiment_name(kind);

    // Global-section hygiene: only the bookkeeping keys belong there.
    {
        const auto unknown = config.unknown_keys("", {"experiment", "seeds", "output_dir", "version"});
        if (!unknown.empty()) {
            throw ConfigError("unknown key '" + unknown.front() + "' outside any section",
                              unknown.front());
        }
        for (const auto& [name, entries] : config.sections()) {
            if (!name.empty() && name != section) {
                throw ConfigError("section [" + name + "] does not match experiment '" + section + "'",
                                  name);
            }
        }
    }

    DriverContext ctx;
    ctx.seeds = !options.seeds.empty()
                    ? options.seeds
                    : get_seed_list(config, "", "seeds", default_seeds());
    ctx.threads = options.threads;

    if (!options.output_dir.empty()) {
        ctx.out_dir = options.output_dir;
    } else if (const char* env = std::getenv("SCALINGLAB_OUT"); env && *env) {
        ctx.out_dir = env;
    } else {
        ctx.out_dir = get_string(config, "", "output_dir", "out");
    }

    std::error_code fs_error;
    std::filesystem::create_directories(ctx.out_dir, fs_error);
    {
        const std::string probe = detail::join_path(ctx.out_dir, "manifest.cfg");
        std::ofstream test_out(probe, std::ios::app);
        if (fs_error || !test_out) {
            throw ConfigError("output_dir '" + ctx.out_dir + "' is not writable", "output_dir");
        }
    }

    Config resolved;
    resolved.set("", "version", kVersion);
    resolved.set("", "experiment", section);
    {
        std::ostringstream joined;
        for (std::size_t i = 0; i < ctx.seeds.size(); ++i) {
            if (i) joined << ",";
            joined << ctx.seeds[i];
        }
        resolved.set("", "seeds", joined.str());
    }
    resolved.set("", "output_dir", ctx.out_dir);

    switch (kind) {
        case ExperimentKind::SubspaceVerify:
            run_subspace_verify(config, resolved, ctx);
            break;
        case ExperimentKind::LinearTradeoff:
            run_linear_tradeoff(config, resolved, ctx);
            break;
        case ExperimentKind::DdCurve:
            run_ddcurve(config, resolved, ctx);
            break;
        case ExperimentKind::Predict:
            run_predict(config, resolved, ctx);
            break;
        case ExperimentKind::NnTradeoff:
            run_nn_tradeoff(config, resolved, ctx);
            break;
        case ExperimentKind::NnDataScan:
            run_nn_data_scan(config, resolved, ctx);
            break;
        case ExperimentKind::NnNoiseScan:
            run_nn_noise_scan(config, resolved, ctx);
            break;
    }

    const std::string manifest_path = detail::join_path(ctx.out_dir, "manifest.cfg");
    std::ofstream manifest(manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest) throw std::runtime_error("cannot write " + manifest_path);
    manifest << serialize_config(resolved);
    manifest.close();
    ctx.written.push_back(manifest_path);

    return ctx.written;
}

std::vector<std::string> run_experiment_file(const std::string& config_path,
                                             const RunOptions& options) {
    return run_experiment(load_config(config_path), options);
}

}  // namespace scalinglab::harness
