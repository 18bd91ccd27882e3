#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flightq/geometry.hpp"

namespace flightq {

enum class DroneState { Spawned, Approaching, Queued, Swapping, Admitted, Failed };

const char* to_string(DroneState s);

struct Drone {
    std::int64_t id = -1;
    Vec3 position{};
    double v_max = 1.0;
    double remaining_flight_time = 0.0;  // seconds of battery left
    DroneState state = DroneState::Spawned;

    int slot = -1;                 // reserved slot while Approaching/Queued/Swapping
    int opening = -1;              // opening this drone was dispatched to
    std::int64_t swap_partner = -1;
    std::string drone_class;

    double spawn_time = 0.0;
    double spawn_battery = 0.0;
    double admitted_time = -1.0;
    double failed_time = -1.0;
    int approach_phase = 0;  // 0 climb, 1 cruise, 2 descend
    int approach_lane = 0;   // cruise altitude band, assigned at enqueue

    bool terminal() const {
        return state == DroneState::Admitted || state == DroneState::Failed;
    }
};

// Flat drone table; ids are dense and double as indices.
class DroneStore {
  public:
    Drone& spawn(Drone d);
    Drone& at(std::int64_t id) { return drones_.at(static_cast<std::size_t>(id)); }
    const Drone& at(std::int64_t id) const { return drones_.at(static_cast<std::size_t>(id)); }
    std::vector<Drone>& all() { return drones_; }
    const std::vector<Drone>& all() const { return drones_; }
    std::size_t size() const { return drones_.size(); }

  private:
    std::vector<Drone> drones_;
};

enum class PolicyKind { Fifo, LeastRemainingFlightTimeFirst };

struct Policy {
    PolicyKind kind = PolicyKind::Fifo;
    double swap_duration = 0.0;   // seconds a position swap takes
    double lateral_offset = 0.0;  // arc offset keeping swapping drones apart
};

struct SlotAssignment {
    int slot = -1;
    Vec3 position{};
};

// In-flight position exchange between two adjacent slots. Both drones follow
// flattened semicircular arcs on opposite sides of the leg; their separation
// follows a sin profile with minimum 2 * lateral_offset at the crossing.
struct SwapPlan {
    std::int64_t drone_a = -1;  // starts at slot_low
    std::int64_t drone_b = -1;  // starts at slot_low + 1
    int slot_low = -1;
    Vec3 from_a{}, from_b{};
    Vec3 along{};    // unit vector from_a -> from_b
    Vec3 lateral{};  // unit vector, arc offset direction
    double distance = 0.0;
    double offset = 0.0;
    double start_time = 0.0;
    double duration = 0.0;

    Vec3 position_a(double phase) const;  // phase in [0, 1]
    Vec3 position_b(double phase) const;
    double phase_at(double now) const;
};

// Slot-occupancy state machine for one pattern bound to one opening.
// Admissions fire on the arithmetic grid k / lambda, k = 1, 2, ...
class PatternQueue {
  public:
    PatternQueue() = default;
    PatternQueue(Pattern pattern, double lambda, Policy policy);

    const Pattern& pattern() const { return pattern_; }
    double lambda() const { return lambda_; }
    const Policy& policy() const { return policy_; }

    int slot_count() const { return pattern_.slot_count(); }
    std::int64_t occupant(int slot) const { return occupant_.at(static_cast<std::size_t>(slot)); }
    bool slot_free(int slot) const { return occupant(slot) < 0; }
    int occupancy_size() const;
    int tail_index() const;  // highest occupied slot, -1 if empty
    bool contains(std::int64_t drone_id) const;

    double next_admission_time() const {
        return static_cast<double>(ticks_fired_ + 1) / lambda_;
    }
    std::int64_t ticks_fired() const { return ticks_fired_; }

    // Assigns the opening slot when empty, otherwise the slot behind the
    // current tail. Returns nullopt (Hold) when no slot behind the tail is
    // free; the drone keeps hovering at its spawn point and retries later.
    std::optional<SlotAssignment> enqueue(Drone& drone);

    // One admission tick: admits the settled head drone if present, advances
    // settled queued drones into free slots toward the head, and moves the
    // admission grid forward by exactly 1/lambda.
    std::optional<std::int64_t> admission_tick(DroneStore& drones, double now);

    // One reordering round under the LRF policy: non-overlapping adjacent
    // pairs (k, k+1) whose remaining flight times are out of order, scanned
    // from the head. Rounds alternate odd-even transposition phases; only
    // settled, queued drones participate.
    std::vector<int> gossip_round(const DroneStore& drones);

    // Starts the swap of slots (k, k+1). Throws SlotEmpty / SwapWindowTooShort.
    SwapPlan execute_swap(DroneStore& drones, int k, double now);

    // Completes a swap: exchanges occupancy entries and returns both drones
    // to Queued at their new slots. Tolerates a partner lost mid-swap.
    void finish_swap(DroneStore& drones, const SwapPlan& plan);

    void vacate(std::int64_t drone_id);

    // occupancy injectivity + capacity; throws Error on breach
    void check_invariants(const DroneStore& drones) const;

    static bool settled(const Drone& d, const Vec3& slot_pos) {
        return d.position.distance_to(slot_pos) <= 1e-9;
    }

  private:
    Pattern pattern_;
    double lambda_ = 1.0;
    Policy policy_;
    std::vector<std::int64_t> occupant_;  // -1 = free
    std::int64_t ticks_fired_ = 0;
    std::int64_t gossip_rounds_ = 0;
};

}  // namespace flightq
