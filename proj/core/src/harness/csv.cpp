#include "scalinglab/harness/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scalinglab::harness {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_table(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw std::invalid_argument("write_table: row width differs from header");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Table read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    Table table;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (header) {
            table.columns = std::move(cells);
            header = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

void emit_csv(const AggregateSeries& series, const std::string& path) {
    Table table;
    table.columns = {"x", "mean", "std_err"};
    for (std::size_t i = 0; i < series.x.size(); ++i) {
        table.rows.push_back({format_double(series.x[i]), format_double(series.mean[i]),
                              format_double(series.std_err[i])});
    }
    write_table(table, path);
}

void emit_csv(const scale_time::TradeoffCurve& curve, const std::string& path) {
    Table table;
    table.columns = {"scale", "min_time", "std_err", "censored"};
    for (const auto& point : curve.points) {
        table.rows.push_back({format_double(point.scale),
                              point.min_time ? format_double(*point.min_time) : "nan",
                              format_double(point.std_err), point.min_time ? "0" : "1"});
    }
    write_table(table, path);
}

void emit_csv(const linear::ErrorCurve& curve, const std::string& path) {
    Table table;
    table.columns = {"x", "total_sq_error", "signal_sq", "noise_sq"};
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        table.rows.push_back({format_double(curve.grid[i]), format_double(curve.total_sq_error[i]),
                              format_double(curve.signal_sq[i]), format_double(curve.noise_sq[i])});
    }
    write_table(table, path);
}

}  // namespace scalinglab::harness
