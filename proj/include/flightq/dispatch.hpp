#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "flightq/queue.hpp"

namespace flightq {

// A passage point into the infrastructure, consuming drones at lambda per
// second through its own pattern queue.
struct Opening {
    int id = -1;
    Vec3 position{};
    double lambda = 0.0;
    PatternQueue queue;
};

enum class DispatchMode { Exclusive, Shared, Hybrid };

struct HybridGroup {
    DispatchMode mode = DispatchMode::Shared;  // Shared or Exclusive only
    std::vector<int> openings;
    std::vector<std::string> classes;          // drone classes served by this group
    double lambda_total = 0.0;                 // Shared groups
    std::map<std::string, int> partition;      // Exclusive groups
};

struct DispatchConfig {
    DispatchMode mode = DispatchMode::Shared;
    double lambda_total = 0.0;
    double w_wait = 1.0;
    double w_travel = 1.0;
    bool count_inbound = false;  // include drones en route in the wait estimate
    std::map<std::string, int> partition;  // Exclusive: drone class -> opening id
    std::vector<HybridGroup> groups;       // Hybrid
};

struct AssignmentDecision {
    std::int64_t drone_id = -1;
    int opening_id = -1;
    double estimated_wait = 0.0;
    double travel_time = 0.0;
    bool feasible = false;
};

// Passes iff the openings' rates sum to lambda_total within 1e-12 relative.
// Throws RateMismatch with the residual otherwise.
void validate_rates(std::span<const Opening> openings, double lambda_total);

// Centralized Orchestrator: one assignment per drone, released on admission
// or failure.
class Dispatcher {
  public:
    Dispatcher() = default;
    explicit Dispatcher(DispatchConfig config) : config_(std::move(config)) {}

    const DispatchConfig& config() const { return config_; }

    // Routes a spawned drone. `inbound` (optional, indexed like `openings`)
    // adds drones already en route to the wait estimate when count_inbound
    // is set. Throws EmptyOpeningSet / UnmappedDroneClass.
    AssignmentDecision assign(const Drone& drone,
                              std::span<const Opening> openings,
                              std::span<const int> inbound = {});

    // Closes the drone's assignment record. Throws UnknownAssignment.
    void release(int opening_id, std::int64_t drone_id);

    bool has_open_assignment(std::int64_t drone_id) const;

  private:
    AssignmentDecision best_of(const Drone& drone,
                               std::span<const Opening> openings,
                               std::span<const int> candidate_ids,
                               std::span<const int> inbound) const;

    DispatchConfig config_;
    std::map<std::int64_t, int> open_assignments_;
};

}  // namespace flightq
