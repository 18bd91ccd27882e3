#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>

#include "flightq/queue.hpp"

namespace flightq {

// One per-tick world-snapshot row for one drone.
struct TickRecord {
    double t = 0.0;
    std::int64_t drone = -1;
    Vec3 position{};
    DroneState state = DroneState::Spawned;
    int slot = -1;
    int opening = -1;
    double remaining = 0.0;
};

// Discrete simulation event. Fields below `kind` are filled per kind; the
// serializer only emits the ones that apply.
struct Event {
    double t = 0.0;
    std::string kind;  // spawn, assignment, enqueue, hold, arrival, admission,
                       // swap_start, swap_end, failure, separation_violation
    std::int64_t drone = -1;
    std::int64_t drone_b = -1;
    int opening = -1;
    int slot = -1;
    int slot_b = -1;
    bool has_position = false;
    Vec3 position{};
    double battery = -1.0;
    double estimated_wait = -1.0;
    double travel_time = -1.0;
    int feasible = -1;  // -1 unset, else 0/1
    double transit = -1.0;
    double distance = -1.0;
    std::string drone_class;
};

struct TraceHeader {
    int version = 1;
    std::string scenario;
    std::uint64_t seed = 0;
    double dt = 0.0;
    double delta_min = 0.0;
};

std::string to_json_line(const TraceHeader& h);
std::string to_json_line(const TickRecord& r);
std::string to_json_line(const Event& e);

class TraceSink {
  public:
    virtual ~TraceSink() = default;
    virtual void write_line(std::string_view line) = 0;
};

class NullSink : public TraceSink {
  public:
    void write_line(std::string_view) override {}
};

class FileSink : public TraceSink {
  public:
    explicit FileSink(const std::string& path);
    void write_line(std::string_view line) override;

  private:
    std::ofstream out_;
};

// FNV-1a over every emitted byte; enough to compare whole traces without
// keeping them.
class HashSink : public TraceSink {
  public:
    void write_line(std::string_view line) override;
    std::uint64_t digest() const { return hash_; }

  private:
    std::uint64_t hash_ = 1469598103934665603ull;
};

class StringSink : public TraceSink {
  public:
    void write_line(std::string_view line) override {
        data_.append(line);
        data_.push_back('\n');
    }
    const std::string& str() const { return data_; }

  private:
    std::string data_;
};

}  // namespace flightq
