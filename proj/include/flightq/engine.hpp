#pragma once

#include <deque>

#include "flightq/scenario.hpp"
#include "flightq/trace.hpp"

namespace flightq {

struct RunResult {
    Metrics metrics;
    std::vector<Event> events;
};

// Deterministic fixed-timestep world simulation. One Simulation instance is
// owned and advanced by a single logical actor.
class Simulation {
  public:
    // Throws ConfigInvalid when the scenario does not validate.
    explicit Simulation(Scenario scenario, TraceSink* sink = nullptr);

    void step();
    bool finished() const;
    double clock() const { return static_cast<double>(tick_) * scenario_.sim.dt; }

    const Scenario& scenario() const { return scenario_; }
    const DroneStore& drones() const { return drones_; }
    const std::vector<Opening>& openings() const { return openings_; }
    const Metrics& metrics() const { return metrics_; }

    // Runs to completion and hands back metrics plus the event log.
    RunResult finish();

  private:
    struct OpeningExtra {
        Vec3 normal{};
        double top_offset = 0.0;  // max slot offset along the normal
        std::deque<std::int64_t> holds;
        std::int64_t gossip_round_mark = -1;  // admission counter of last round
        int active_swaps = 0;
        std::int64_t enqueue_seq = 0;  // drives cruise-lane rotation
    };
    struct ActiveSwap {
        SwapPlan plan;
        std::size_t opening_index = 0;
    };

    void spawn_due_arrivals();
    void complete_due_swaps();
    void fire_admissions();
    void start_gossip_swaps();
    void snapshot();
    void move_drones();
    void drain_batteries();
    void audit_separation();
    void account_tick();

    void emit(const Event& e);
    void move_approaching(Drone& d, const Opening& o, const OpeningExtra& extra);
    double cruise_altitude(const Drone& d, const OpeningExtra& extra) const;
    std::size_t opening_index(int opening_id) const;

    Scenario scenario_;
    TraceSink* sink_;
    std::vector<Arrival> arrivals_;
    std::size_t next_arrival_ = 0;
    DroneStore drones_;
    std::vector<Opening> openings_;
    std::vector<OpeningExtra> extras_;
    Dispatcher dispatcher_;
    std::vector<ActiveSwap> swaps_;
    Metrics metrics_;
    std::vector<Event> events_;
    std::int64_t tick_ = 0;
    bool final_snapshot_done_ = false;
};

// Convenience wrapper: construct, run, finish.
RunResult run(const Scenario& scenario, TraceSink* sink = nullptr);

}  // namespace flightq
