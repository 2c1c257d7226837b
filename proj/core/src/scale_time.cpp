#include "scalinglab/scale_time.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "scalinglab/errors.hpp"

namespace scalinglab::scale_time {

double effective_params(long long absolute_count) {
    if (absolute_count < 1) {
        throw std::invalid_argument("effective_params: parameter count must be >= 1");
    }
    return std::cbrt(static_cast<double>(absolute_count));
}

long long mlp_param_count(int in_dim, int width, int depth, int out_dim) {
    if (in_dim < 1 || width < 1 || out_dim < 1) {
        throw std::invalid_argument("mlp_param_count: dimensions must be >= 1");
    }
    if (depth < 2) {
        throw std::invalid_argument("mlp_param_count: depth must be >= 2");
    }
    const long long in = in_dim, w = width, out = out_dim;
    return (in * w + w) + static_cast<long long>(depth - 2) * (w * w + w) + (w * out + out);
}

void MeasuredCurve::validate() const {
    const std::size_t n = times.size();
    if (train_error.size() != n || test_error.size() != n) {
        throw std::invalid_argument("MeasuredCurve: sequence lengths differ");
    }
    if (!train_std_err.empty() && (train_std_err.size() != n || test_std_err.size() != n)) {
        throw std::invalid_argument("MeasuredCurve: std_err length differs");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(times[i] < times[i + 1])) {
            throw std::invalid_argument("MeasuredCurve: times must be strictly increasing");
        }
    }
}

namespace {

// Linear interpolation of y over an ascending x grid. Exact grid hits return
// the stored value bit-for-bit (weight 0 adds nothing).
double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) {
        if (x == xs.back()) return ys.back();
        return ys.back();
    }
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double x0 = xs[j - 1], x1 = xs[j];
    const double w = (x - x0) / (x1 - x0);
    return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

// Interpolate error linearly in (log time, error).
double interp_log_x(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    std::vector<double> lx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) lx[i] = std::log(xs[i]);
    return interp_linear(lx, ys, std::log(x));
}

}  // namespace

std::vector<ScalePrediction> predict_across_scale(const MeasuredCurve& curve,
                                                  const std::vector<ScaleTarget>& targets,
                                                  bool allow_clamp) {
    curve.validate();
    if (curve.times.empty()) throw std::invalid_argument("predict_across_scale: empty curve");
    if (!(curve.scale > 0)) throw std::invalid_argument("predict_across_scale: nonpositive scale");
    if (curve.times.front() <= 0) {
        throw std::invalid_argument("predict_across_scale: times must be positive for log remapping");
    }

    const double t_lo = curve.times.front();
    const double t_hi = curve.times.back();

    std::vector<ScalePrediction> out;
    out.reserve(targets.size());
    for (const auto& target : targets) {
        if (!(target.scale > 0)) {
            throw std::invalid_argument("predict_across_scale: target scale must be positive");
        }
        double remapped = (target.scale / curve.scale) * target.time;
        bool clamped = false;
        if (remapped < t_lo || remapped > t_hi) {
            if (!allow_clamp) {
                std::ostringstream msg;
                msg << "predict_across_scale: remapped time " << remapped
                    << " outside measured range [" << t_lo << ", " << t_hi
                    << "]; a curve measured to horizon " << remapped << " is required";
                throw PredictionRangeError(msg.str());
            }
            remapped = std::clamp(remapped, t_lo, t_hi);
            clamped = true;
        }
        ScalePrediction p;
        p.remapped_time = remapped;
        p.clamped = clamped;
        p.predicted_train = interp_log_x(curve.times, curve.train_error, remapped);
        p.predicted_test = interp_log_x(curve.times, curve.test_error, remapped);
        out.push_back(p);
    }
    return out;
}

std::vector<TimePrediction> predict_across_time(const std::vector<MeasuredCurve>& curves,
                                                double t0, double target_scale,
                                                const std::vector<double>& t_grid) {
    if (curves.size() < 2) {
        throw std::invalid_argument("predict_across_time: need curves at >= 2 scales");
    }
    if (!(t0 > 0) || !(target_scale > 0)) {
        throw std::invalid_argument("predict_across_time: t0 and target_scale must be positive");
    }

    // Evaluate every curve at t0, sorted by scale.
    struct AtT0 {
        double scale, train, test;
    };
    std::vector<AtT0> at;
    at.reserve(curves.size());
    for (const auto& c : curves) {
        c.validate();
        if (t0 < c.times.front() || t0 > c.times.back()) {
            std::ostringstream msg;
            msg << "predict_across_time: curve at scale " << c.scale << " does not cover t0=" << t0;
            throw PredictionRangeError(msg.str());
        }
        at.push_back({c.scale, interp_log_x(c.times, c.train_error, t0),
                      interp_log_x(c.times, c.test_error, t0)});
    }
    std::sort(at.begin(), at.end(), [](const AtT0& a, const AtT0& b) { return a.scale < b.scale; });

    std::vector<double> log_scales, trains, tests;
    for (const auto& a : at) {
        log_scales.push_back(std::log(a.scale));
        trains.push_back(a.train);
        tests.push_back(a.test);
    }

    std::vector<TimePrediction> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        const double p0 = target_scale * t / t0;
        if (p0 < at.front().scale || p0 > at.back().scale) {
            std::ostringstream msg;
            msg << "predict_across_time: required source scale " << p0 << " outside measured range ["
                << at.front().scale << ", " << at.back().scale << "] at t=" << t;
            throw PredictionRangeError(msg.str());
        }
        TimePrediction p;
        p.time = t;
        p.source_scale = p0;
        p.predicted_train = interp_linear(log_scales, trains, std::log(p0));
        p.predicted_test = interp_linear(log_scales, tests, std::log(p0));
        out.push_back(p);
    }
    return out;
}

std::optional<double> min_time_to_threshold(const MeasuredCurve& curve, double threshold,
                                            Channel channel) {
    curve.validate();
    if (!(threshold > 0)) throw std::invalid_argument("min_time_to_threshold: threshold must be > 0");
    const std::vector<double>& err = channel == Channel::Train ? curve.train_error : curve.test_error;
    if (err.empty()) return std::nullopt;

    if (err[0] <= threshold) return curve.times[0];
    for (std::size_t i = 1; i < err.size(); ++i) {
        if (err[i] <= threshold) {
            // First crossing; linear interpolation in (time, error).
            if (err[i] == threshold || err[i - 1] == err[i]) return curve.times[i];
            const double w = (err[i - 1] - threshold) / (err[i - 1] - err[i]);
            return curve.times[i - 1] + w * (curve.times[i] - curve.times[i - 1]);
        }
    }
    return std::nullopt;
}

TradeoffCurve tradeoff_from_runs(const std::vector<MeasuredCurve>& runs, double threshold,
                                 Channel channel) {
    std::map<double, std::vector<std::optional<double>>> by_scale;
    for (const auto& run : runs) {
        by_scale[run.scale].push_back(min_time_to_threshold(run, threshold, channel));
    }
    if (by_scale.size() < 2) {
        throw std::invalid_argument("tradeoff_from_runs: need runs at >= 2 distinct scales");
    }

    TradeoffCurve curve;
    curve.threshold = threshold;
    curve.channel = channel;
    for (const auto& [scale, hits] : by_scale) {
        TradeoffPoint point;
        point.scale = scale;
        point.n_runs = static_cast<int>(hits.size());
        std::vector<double> reached;
        for (const auto& h : hits) {
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
                const double sd = std::sqrt(ss / static_cast<double>(reached.size() - 1));
                point.std_err = sd / std::sqrt(static_cast<double>(reached.size()));
                point.has_std_err = true;
            }
        }
        curve.points.push_back(point);
    }
    return curve;
}

SlopeFit loglog_slope(const TradeoffCurve& curve) {
    std::vector<double> xs, ys;
    for (const auto& p : curve.points) {
        if (p.min_time) {
            xs.push_back(std::log10(p.scale));
            ys.push_back(std::log10(*p.min_time));
        }
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("loglog_slope: need >= 2 uncensored points");
    }

    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("loglog_slope: degenerate fit (all scales equal)");

    SlopeFit fit;
    fit.n_points = static_cast<int>(xs.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0) {
        fit.r_squared = 1.0;  // flat targets fitted exactly
    } else {
        double ss_res = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
            ss_res += r * r;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

}  // namespace scalinglab::scale_time
