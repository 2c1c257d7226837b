#pragma once

#include <string>
#include <vector>

#include "scalinglab/harness/series.hpp"

namespace scalinglab::harness {

struct AxesSpec {
    bool log_x = false;
    bool log_y = false;
    std::string x_label;
    std::string y_label;
    std::string title;
    /// Draw a dashed guide of slope -1 in plot coordinates (the 1:1
    /// scale/time proportionality line); requires log-log axes.
    bool guide_slope_minus_one = false;
};

/// Standalone SVG line plot: one polyline per series, shaded error bands
/// where std_err is nonzero, and the optional slope -1 guide. Throws
/// std::invalid_argument for empty input or nonpositive values on log axes.
void emit_svg_plot(const std::vector<AggregateSeries>& series, const AxesSpec& axes,
                   const std::string& path);

}  // namespace scalinglab::harness
