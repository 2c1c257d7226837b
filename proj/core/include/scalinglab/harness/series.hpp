#pragma once

#include <string>
#include <vector>

namespace scalinglab::harness {

/// One y-series measured on a shared x grid (a single seed's run).
struct SeedSeries {
    std::vector<double> x;
    std::vector<double> y;
};

/// Pointwise mean and standard error across seeds on a shared x grid.
/// std_err is the sample standard deviation over sqrt(n_seeds); zero for a
/// single seed.
struct AggregateSeries {
    std::vector<double> x;
    std::vector<double> mean;
    std::vector<double> std_err;
    std::string label;
    int n_seeds = 0;
};

/// Aggregates per-seed series. Throws std::invalid_argument when the series
/// do not share the x grid exactly.
AggregateSeries aggregate_seeds(const std::vector<SeedSeries>& series, const std::string& label);

}  // namespace scalinglab::harness
