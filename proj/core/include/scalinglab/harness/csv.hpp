#pragma once

#include <string>
#include <vector>

#include "scalinglab/harness/series.hpp"
#include "scalinglab/linear_model.hpp"
#include "scalinglab/scale_time.hpp"

namespace scalinglab::harness {

/// Shortest decimal form that round-trips the double exactly (17 significant
/// digits).
std::string format_double(double value);

/// A CSV in memory: header row plus string cells. Rows are written in the
/// order given; writers are responsible for sorting by ascending x.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& table, const std::string& path);
Table read_table(const std::string& path);

// Fixed schemas. Column names are part of the output contract.
//   AggregateSeries: x,mean,std_err
//   TradeoffCurve:   scale,min_time,std_err,censored
//   ErrorCurve:      x,total_sq_error,signal_sq,noise_sq
void emit_csv(const AggregateSeries& series, const std::string& path);
void emit_csv(const scale_time::TradeoffCurve& curve, const std::string& path);
void emit_csv(const linear::ErrorCurve& curve, const std::string& path);

}  // namespace scalinglab::harness
