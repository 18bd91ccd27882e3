#pragma once

#include <string>
#include <vector>

#include "flightq/engine.hpp"

namespace flightq {

void write_metrics_csv(const std::string& path, const Metrics& m);

// Metrics re-derived from a trace file by an independent reader, plus the
// per-tick time series. The engine is not involved; this doubles as a
// self-consistency oracle for the run's own accounting.
struct TraceSummary {
    TraceHeader header;
    Metrics metrics;
    struct Row {
        double t = 0.0;
        int holding = 0;
        int approaching = 0;
        int queued = 0;
        int swapping = 0;
        std::int64_t admitted_cum = 0;
        std::int64_t failed_cum = 0;
        double min_sep = 0.0;
        bool has_min_sep = false;
    };
    std::vector<Row> rows;
};

TraceSummary summarize_trace(const std::string& trace_path);
void write_timeseries_csv(const std::string& path, const TraceSummary& s);
std::string render_summary_table(const Metrics& m);

struct CompareRow {
    std::uint64_t seed = 0;
    std::int64_t failures_a = 0;
    std::int64_t failures_b = 0;
    double transit_mean_a = 0.0;
    double transit_mean_b = 0.0;
};

// True when the scenarios differ only in queue policy and/or dispatch mode.
bool comparable_scenarios(const Scenario& a, const Scenario& b);

// Runs both scenarios across seeds 0..n_seeds-1.
std::vector<CompareRow> compare_scenarios(const Scenario& a, const Scenario& b,
                                          int n_seeds);
void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows);

}  // namespace flightq
