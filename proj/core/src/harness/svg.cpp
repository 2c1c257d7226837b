#include "scalinglab/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace scalinglab::harness {

namespace {

constexpr double kWidth = 800, kHeight = 560;
constexpr double kLeft = 72, kRight = 24, kTop = 44, kBottom = 56;

const char* kPalette[] = {"#c62828", "#1565c0", "#2e7d32", "#6a1b9a", "#ef6c00", "#00838f"};
constexpr int kPaletteSize = 6;

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    return buffer;
}

struct Mapper {
    bool log_x, log_y;
    double x0, x1, y0, y1;  // data domain (already log10 when log)

    double tx(double x) const {
        const double v = log_x ? std::log10(x) : x;
        return kLeft + (v - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
    }
    double ty(double y) const {
        const double v = log_y ? std::log10(y) : y;
        return kHeight - kBottom - (v - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
    }
};

std::vector<double> tick_values(double lo, double hi, bool log_axis) {
    std::vector<double> ticks;
    if (log_axis) {
        for (int e = static_cast<int>(std::ceil(lo - 1e-9)); e <= static_cast<int>(std::floor(hi + 1e-9));
             ++e) {
            ticks.push_back(static_cast<double>(e));
        }
        if (ticks.empty()) ticks = {lo, hi};
    } else {
        const int n = 5;
        for (int i = 0; i <= n; ++i) ticks.push_back(lo + (hi - lo) * i / n);
    }
    return ticks;
}

std::string tick_label(double v, bool log_axis) {
    char buffer[32];
    if (log_axis) {
        std::snprintf(buffer, sizeof(buffer), "1e%d", static_cast<int>(std::lround(v)));
    } else {
        std::snprintf(buffer, sizeof(buffer), "%.3g", v);
    }
    return buffer;
}

}  // namespace

void emit_svg_plot(const std::vector<AggregateSeries>& series, const AxesSpec& axes,
                   const std::string& path) {
    std::size_t points = 0;
    for (const auto& s : series) points += s.x.size();
    if (series.empty() || points == 0) {
        throw std::invalid_argument("emit_svg_plot: no data");
    }
    if (axes.guide_slope_minus_one && !(axes.log_x && axes.log_y)) {
        throw std::invalid_argument("emit_svg_plot: the slope -1 guide requires log-log axes");
    }

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        if (s.mean.size() != s.x.size() || s.std_err.size() != s.x.size()) {
            throw std::invalid_argument("emit_svg_plot: series lengths differ");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (axes.log_x && !(s.x[i] > 0)) {
                throw std::invalid_argument("emit_svg_plot: nonpositive x on a log axis");
            }
            if (axes.log_y && !(s.mean[i] > 0)) {
                throw std::invalid_argument("emit_svg_plot: nonpositive y on a log axis");
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.mean[i]);
            ymax = std::max(ymax, s.mean[i]);
        }
    }

    Mapper map;
    map.log_x = axes.log_x;
    map.log_y = axes.log_y;
    map.x0 = axes.log_x ? std::log10(xmin) : xmin;
    map.x1 = axes.log_x ? std::log10(xmax) : xmax;
    map.y0 = axes.log_y ? std::log10(ymin) : ymin;
    map.y1 = axes.log_y ? std::log10(ymax) : ymax;
    // Pad degenerate domains so single points and flat series stay visible.
    if (map.x1 - map.x0 < 1e-12) {
        map.x0 -= 0.5;
        map.x1 += 0.5;
    }
    if (map.y1 - map.y0 < 1e-12) {
        map.y0 -= 0.5;
        map.y1 += 0.5;
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    // Axes frame.
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";

    for (double t : tick_values(map.x0, map.x1, axes.log_x)) {
        const double px = kLeft + (t - map.x0) / (map.x1 - map.x0) * (kWidth - kLeft - kRight);
        svg << "<line x1=\"" << num(px) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << num(px)
            << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(px) << "\" y=\"" << kHeight - kBottom + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << tick_label(t, axes.log_x)
            << "</text>\n";
    }
    for (double t : tick_values(map.y0, map.y1, axes.log_y)) {
        const double py =
            kHeight - kBottom - (t - map.y0) / (map.y1 - map.y0) * (kHeight - kTop - kBottom);
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << kLeft
            << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << tick_label(t, axes.log_y)
            << "</text>\n";
    }
    if (!axes.x_label.empty()) {
        svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
            << "\" font-size=\"14\" text-anchor=\"middle\">" << axes.x_label << "</text>\n";
    }
    if (!axes.y_label.empty()) {
        svg << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
            << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
            << (kTop + kHeight - kBottom) / 2 << ")\">" << axes.y_label << "</text>\n";
    }
    if (!axes.title.empty()) {
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">"
            << axes.title << "</text>\n";
    }

    // Error bands beneath the lines.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        bool any = false;
        for (double e : s.std_err) any = any || e > 0;
        if (!any || s.x.size() < 2) continue;
        const char* color = kPalette[si % kPaletteSize];
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double hi = s.mean[i] + s.std_err[i];
            svg << num(map.tx(s.x[i])) << "," << num(map.ty(hi)) << " ";
        }
        for (std::size_t i = s.x.size(); i-- > 0;) {
            double lo = s.mean[i] - s.std_err[i];
            if (axes.log_y && !(lo > 0)) lo = std::pow(10.0, map.y0);  // clip band to the frame
            svg << num(map.tx(s.x[i])) << "," << num(map.ty(lo));
            if (i) svg << " ";
        }
        svg << "\"/>\n";
    }

    // The 1:1 proportionality guide: slope -1 through the plot center in
    // log-log coordinates.
    if (axes.guide_slope_minus_one) {
        const double cx = (kLeft + kWidth - kRight) / 2;
        const double cy = (kTop + kHeight - kBottom) / 2;
        const double sx = (kWidth - kLeft - kRight) / (map.x1 - map.x0);
        const double sy = (kHeight - kTop - kBottom) / (map.y1 - map.y0);
        const double slope = sy / sx;  // screen-space slope of a -1 data slope
        double xa = kLeft, xb = kWidth - kRight;
        double ya = cy + slope * (xa - cx), yb = cy + slope * (xb - cx);
        if (ya < kTop) {
            xa = cx + (kTop - cy) / slope;
            ya = kTop;
        }
        if (yb > kHeight - kBottom) {
            xb = cx + (kHeight - kBottom - cy) / slope;
            yb = kHeight - kBottom;
        }
        svg << "<line x1=\"" << num(xa) << "\" y1=\"" << num(ya) << "\" x2=\"" << num(xb)
            << "\" y2=\"" << num(yb)
            << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\" stroke-width=\"1\"/>\n";
    }

    // Data series.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            svg << num(map.tx(s.x[i])) << "," << num(map.ty(s.mean[i]));
            if (i + 1 < s.x.size()) svg << " ";
        }
        svg << "\"/>\n";
        if (!s.label.empty()) {
            svg << "<text x=\"" << kWidth - kRight - 6 << "\" y=\"" << kTop + 16 + 16 * si
                << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">" << s.label
                << "</text>\n";
        }
    }

    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << svg.str();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace scalinglab::harness
