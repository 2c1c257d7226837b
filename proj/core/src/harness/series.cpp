#include "scalinglab/harness/series.hpp"

#include <cmath>
#include <stdexcept>

namespace scalinglab::harness {

AggregateSeries aggregate_seeds(const std::vector<SeedSeries>& series, const std::string& label) {
    if (series.empty()) throw std::invalid_argument("aggregate_seeds: no series");
    const std::vector<double>& grid = series.front().x;
    for (const auto& s : series) {
        if (s.x != grid) throw std::invalid_argument("aggregate_seeds: mismatched x grids");
        if (s.y.size() != s.x.size()) {
            throw std::invalid_argument("aggregate_seeds: series lengths differ");
        }
    }

    const std::size_t npoints = grid.size();
    const double n = static_cast<double>(series.size());

    AggregateSeries out;
    out.x = grid;
    out.label = label;
    out.n_seeds = static_cast<int>(series.size());
    out.mean.resize(npoints);
    out.std_err.assign(npoints, 0.0);
    for (std::size_t i = 0; i < npoints; ++i) {
        double sum = 0.0;
        for (const auto& s : series) sum += s.y[i];
        out.mean[i] = sum / n;
        if (series.size() >= 2) {
            double ss = 0.0;
            for (const auto& s : series) {
                const double d = s.y[i] - out.mean[i];
                ss += d * d;
            }
            out.std_err[i] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
    }
    return out;
}

}  // namespace scalinglab::harness
