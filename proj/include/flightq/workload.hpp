#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flightq/geometry.hpp"

namespace flightq {

struct SpawnRegion {
    enum class Kind { Box, Sphere };
    Kind kind = Kind::Box;
    // box
    Vec3 box_min{};
    Vec3 box_max{};
    // sphere (shell when inner_radius > 0)
    Vec3 center{};
    double radius = 0.0;
    double inner_radius = 0.0;

    bool contains(const Vec3& p) const;
};

struct BatteryDistribution {
    enum class Kind { Fixed, Uniform };
    Kind kind = Kind::Fixed;
    double value = 0.0;  // Fixed
    double lo = 0.0;     // Uniform
    double hi = 0.0;
};

struct WorkloadSpec {
    enum class Kind { StagFlocks, Poisson, Burst, Replay };
    Kind kind = Kind::Burst;

    // StagFlocks: one batch of drones_per_flock every interval, h batches.
    int h = 0;
    double interval = 0.0;  // the staggering interval S
    int drones_per_flock = 1;

    // Poisson
    double rate = 0.0;
    double horizon = 0.0;

    // Burst
    int n = 0;
    double at = 0.0;

    // Replay
    std::string replay_path;

    SpawnRegion spawn_region;
    BatteryDistribution battery;
    double min_spawn_separation = 0.5;
    // spacing only applies between arrivals this close in time; <= 0 means
    // always (long runs reuse space once earlier drones have left)
    double separation_window = -1.0;
    std::vector<std::string> class_cycle;  // round-robin drone classes
};

struct Arrival {
    double t = 0.0;
    Vec3 position{};
    double battery = 0.0;
    std::string drone_class;
};

// Deterministic pure function of (spec, seed). Throws InvalidSpec.
std::vector<Arrival> generate(const WorkloadSpec& spec, std::uint64_t seed);

// The rose display at desk scale: h = round(218 * scale) flocks, S = 1.36 s,
// full 300 s batteries, paired with an opening rate that sustains steady
// state. Throws InvalidScale.
struct RoseDeskDefaults {
    WorkloadSpec workload;
    double opening_lambda = 0.0;        // 1 / S
    double initial_flight_time = 0.0;   // 300 s
};
RoseDeskDefaults rose_desk_scale(double scale);

// CSV replay files: one arrival per line, "t,x,y,z,battery,class".
void write_arrivals_csv(const std::string& path, const std::vector<Arrival>& arrivals);
std::vector<Arrival> read_arrivals_csv(const std::string& path);

// Deterministic sampling helpers. Uniform doubles are derived from the raw
// mt19937_64 stream so generated sequences do not depend on the standard
// library's distribution implementations.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}
    double uniform01();
    double uniform(double lo, double hi);
    double exponential(double rate);
    Vec3 in_region(const SpawnRegion& region);

  private:
    std::mt19937_64 eng_;
};

}  // namespace flightq
