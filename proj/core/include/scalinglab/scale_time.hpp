#pragma once

#include <optional>
#include <string>
#include <vector>

namespace scalinglab::scale_time {

/// Effective parameter count: the cube root of the absolute parameter count.
/// This is the scale proxy under which time-to-threshold curves exhibit 1:1
/// proportionality between scale and training time.
double effective_params(long long absolute_count);

/// Parameter count (weights and biases) of a fully connected network with
/// `depth` affine layers, all hidden widths equal to `width`.
long long mlp_param_count(int in_dim, int width, int depth, int out_dim);

enum class Channel { Train, Test };

/// One measured error curve at a fixed scale: per-time train/test error,
/// optionally with per-point standard errors when aggregated over seeds.
struct MeasuredCurve {
    double scale = 0.0;  // effective parameter count p0
    std::vector<double> times;
    std::vector<double> train_error;
    std::vector<double> test_error;
    int n_seeds = 1;
    std::vector<double> train_std_err;  // empty when absent
    std::vector<double> test_std_err;

    void validate() const;  // throws std::invalid_argument
};

struct TradeoffPoint {
    double scale = 0.0;
    std::optional<double> min_time;  // nullopt: censored (threshold never reached)
    double std_err = 0.0;
    bool has_std_err = false;
    int n_runs = 0;
    int n_censored = 0;
};

/// Minimum time-to-threshold as a function of scale; the red curves of the
/// tradeoff plots. Points are sorted by ascending scale.
struct TradeoffCurve {
    std::vector<TradeoffPoint> points;
    double threshold = 0.0;
    Channel channel = Channel::Test;
};

/// Least-squares line through (log10 scale, log10 min_time); slope -1 means
/// exact 1:1 scale/time proportionality. Censored points are excluded.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

struct ScaleTarget {
    double scale = 0.0;  // p1
    double time = 0.0;   // t1
};

struct ScalePrediction {
    double predicted_train = 0.0;
    double predicted_test = 0.0;
    double remapped_time = 0.0;
    bool clamped = false;
};

/// Predict the error at (p1, t1) as the measured error at
/// (p0, (p1/p0) * t1). Lookups interpolate linearly in (log time, error).
/// Remapped times outside the measured range throw PredictionRangeError
/// naming the required horizon, unless `allow_clamp` is set, in which case
/// the query is clamped to the range and flagged.
std::vector<ScalePrediction> predict_across_scale(const MeasuredCurve& curve,
                                                  const std::vector<ScaleTarget>& targets,
                                                  bool allow_clamp = false);

struct TimePrediction {
    double time = 0.0;
    double source_scale = 0.0;  // the p0 whose measurement was used
    double predicted_train = 0.0;
    double predicted_test = 0.0;
};

/// Predict the error of a model of `target_scale` over `t_grid` from a
/// family of curves measured across scales, all evaluated at time t0: the
/// error at (target_scale, t) is read from scale p0 = target_scale * t / t0,
/// interpolating linearly in (log scale, error) between measured scales.
std::vector<TimePrediction> predict_across_time(const std::vector<MeasuredCurve>& curves,
                                                double t0, double target_scale,
                                                const std::vector<double>& t_grid);

/// First time the selected channel falls to or below `threshold`, with
/// linear interpolation in (time, error) between grid points. Returns
/// nullopt when the curve never reaches the threshold.
std::optional<double> min_time_to_threshold(const MeasuredCurve& curve, double threshold,
                                            Channel channel);

/// Per-scale minimum time-to-threshold with mean and standard error over
/// runs sharing a scale. A scale is censored only when every run at that
/// scale is censored.
TradeoffCurve tradeoff_from_runs(const std::vector<MeasuredCurve>& runs, double threshold,
                                 Channel channel = Channel::Test);

SlopeFit loglog_slope(const TradeoffCurve& curve);

}  // namespace scalinglab::scale_time
