#pragma once

// Internal helpers shared by the experiment drivers; not installed.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "scalinglab/harness/config.hpp"
#include "scalinglab/harness/csv.hpp"
#include "scalinglab/harness/series.hpp"
#include "scalinglab/harness/svg.hpp"
#include "scalinglab/scale_time.hpp"

namespace scalinglab::harness::detail {

/// Reads one experiment section with defaults, materializing every value
/// read into the resolved config (the manifest), and rejecting keys that no
/// read claimed.
class Params {
public:
    Params(const Config& input, Config& resolved, std::string section)
        : input_(input), resolved_(resolved), section_(std::move(section)) {}

    long geti(const std::string& key, long fallback) {
        const long v = get_int(input_, section_, key, fallback);
        record(key, std::to_string(v));
        return v;
    }
    double getd(const std::string& key, double fallback) {
        const double v = get_double(input_, section_, key, fallback);
        record(key, format_double(v));
        return v;
    }
    bool getb(const std::string& key, bool fallback) {
        const bool v = get_bool(input_, section_, key, fallback);
        record(key, v ? "true" : "false");
        return v;
    }
    std::string gets(const std::string& key, const std::string& fallback) {
        const std::string v = get_string(input_, section_, key, fallback);
        record(key, v);
        return v;
    }
    std::vector<double> getdl(const std::string& key, const std::vector<double>& fallback) {
        const auto v = get_double_list(input_, section_, key, fallback);
        allowed_.push_back(key);
        if (!v.empty()) {  // empty lists stay implicit so manifests re-parse
            std::ostringstream joined;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) joined << ",";
                joined << format_double(v[i]);
            }
            resolved_.set(section_, key, joined.str());
        }
        return v;
    }
    std::vector<long> getil(const std::string& key, const std::vector<long>& fallback) {
        const auto v = get_int_list(input_, section_, key, fallback);
        std::ostringstream joined;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) joined << ",";
            joined << v[i];
        }
        record(key, joined.str());
        return v;
    }

    /// Call after all reads; throws ConfigError naming the first key the
    /// experiment does not know.
    void reject_unknown() const {
        const auto unknown = input_.unknown_keys(section_, allowed_);
        if (!unknown.empty()) {
            throw ConfigError("unknown key '" + unknown.front() + "' in section [" + section_ + "]",
                              unknown.front());
        }
    }

private:
    void record(const std::string& key, const std::string& value) {
        allowed_.push_back(key);
        resolved_.set(section_, key, value);
    }

    const Config& input_;
    Config& resolved_;
    std::string section_;
    std::vector<std::string> allowed_;
};

inline std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> grid(points);
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < points; ++i) {
        grid[i] = points == 1 ? lo : std::pow(10.0, llo + (lhi - llo) * i / (points - 1));
    }
    return grid;
}

inline std::vector<double> lin_grid(double lo, double hi, int points) {
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    }
    return grid;
}

inline std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

/// Per-experiment working state: where to write and which seeds to run.
struct DriverContext {
    std::string out_dir;
    std::vector<std::uint64_t> seeds;
    int threads = 1;
    std::vector<std::string> written;

    std::string emit_path(const std::string& name) {
        const std::string path = join_path(out_dir, name);
        written.push_back(path);
        return path;
    }
};

/// Log-log tradeoff plot with the 1:1 guide; plots are a courtesy, so a
/// curve that cannot be drawn (log axes over zero) is skipped quietly.
inline void emit_tradeoff_svg(const std::vector<scale_time::TradeoffCurve>& curves,
                              const std::vector<std::string>& labels, DriverContext& ctx,
                              const std::string& name) {
    try {
        std::vector<AggregateSeries> series;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            AggregateSeries s;
            s.label = i < labels.size() ? labels[i] : "";
            for (const auto& point : curves[i].points) {
                if (!point.min_time) continue;
                s.x.push_back(point.scale);
                s.mean.push_back(*point.min_time);
                s.std_err.push_back(point.std_err);
            }
            if (!s.x.empty()) series.push_back(std::move(s));
        }
        AxesSpec axes;
        axes.log_x = true;
        axes.log_y = true;
        axes.x_label = "scale";
        axes.y_label = "min time to threshold";
        axes.guide_slope_minus_one = true;
        const std::string path = join_path(ctx.out_dir, name);
        emit_svg_plot(series, axes, path);
        ctx.written.push_back(path);
    } catch (const std::invalid_argument&) {
    }
}

}  // namespace scalinglab::harness::detail
