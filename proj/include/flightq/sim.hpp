#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "flightq/geometry.hpp"

namespace flightq {

struct SimConfig {
    double dt = 0.01;                   // seconds per tick
    double delta_min = 0.1;             // minimum allowed separation, m
    double v_max = 1.0;                 // default drone speed capability, m/s
    double initial_flight_time = 300.0; // fully-charged battery budget, s
    double horizon = 60.0;              // simulated span cap, s
    std::uint64_t seed = 0;

    // Approach staging: drones cruise above the pattern's top at
    // approach_offset * (1 + id % approach_lanes) before descending onto
    // their slot. 0 means 2 * delta_min.
    double approach_offset = 0.0;
    int approach_lanes = 8;

    double effective_approach_offset() const {
        return approach_offset > 0.0 ? approach_offset : 2.0 * delta_min;
    }
};

struct OpeningMetrics {
    int opening_id = -1;
    std::int64_t assigned = 0;
    std::int64_t admitted = 0;
    std::int64_t failed = 0;
    double transit_sum = 0.0;
    double transit_max = 0.0;
    int max_queue_len = 0;  // occupancy plus holders, peak
};

struct Metrics {
    std::int64_t spawned = 0;
    std::int64_t admitted = 0;
    std::int64_t failed = 0;
    double elapsed = 0.0;
    double transit_sum = 0.0;
    double transit_max = 0.0;
    double min_separation = std::numeric_limits<double>::infinity();
    std::int64_t separation_violations = 0;
    std::int64_t invariant_breaches = 0;
    int max_queue_len = 0;
    std::vector<OpeningMetrics> per_opening;

    double throughput() const { return elapsed > 0.0 ? admitted / elapsed : 0.0; }
    double transit_mean() const {
        return admitted > 0 ? transit_sum / static_cast<double>(admitted) : 0.0;
    }
};

struct SeparationReport {
    double min_distance = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::size_t, std::size_t>> violations;  // index pairs
};

// Exact pairwise minimum; every pair strictly below delta_min is reported
// once. Fewer than two positions yields +infinity and no violations.
SeparationReport check_separation(std::span<const Vec3> positions, double delta_min);

}  // namespace flightq
