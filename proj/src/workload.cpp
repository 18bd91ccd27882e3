#include "flightq/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flightq {

bool SpawnRegion::contains(const Vec3& p) const {
    if (kind == Kind::Box) {
        return p.x >= box_min.x - 1e-12 && p.x <= box_max.x + 1e-12 &&
               p.y >= box_min.y - 1e-12 && p.y <= box_max.y + 1e-12 &&
               p.z >= box_min.z - 1e-12 && p.z <= box_max.z + 1e-12;
    }
    double d = p.distance_to(center);
    return d <= radius + 1e-12 && d >= inner_radius - 1e-12;
}

double Sampler::uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Sampler::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double Sampler::exponential(double rate) {
    double u = uniform01();
    return -std::log1p(-u) / rate;
}

Vec3 Sampler::in_region(const SpawnRegion& region) {
    if (region.kind == SpawnRegion::Kind::Box) {
        return {uniform(region.box_min.x, region.box_max.x),
                uniform(region.box_min.y, region.box_max.y),
                uniform(region.box_min.z, region.box_max.z)};
    }
    // rejection sample the shell from its bounding box
    for (int tries = 0; tries < 10000; ++tries) {
        Vec3 p{uniform(-region.radius, region.radius),
               uniform(-region.radius, region.radius),
               uniform(-region.radius, region.radius)};
        double d = p.norm();
        if (d <= region.radius && d >= region.inner_radius) return region.center + p;
    }
    throw InvalidSpec("spawn shell too thin to sample");
}

namespace {

void validate_region(const SpawnRegion& r) {
    if (r.kind == SpawnRegion::Kind::Box) {
        if (!(r.box_min.x < r.box_max.x && r.box_min.y < r.box_max.y &&
              r.box_min.z < r.box_max.z))
            throw InvalidSpec("spawn box must have positive extent on every axis");
    } else {
        if (r.radius <= 0.0) throw InvalidSpec("spawn sphere radius must be > 0");
        if (r.inner_radius < 0.0 || r.inner_radius >= r.radius)
            throw InvalidSpec("spawn shell inner radius must lie in [0, radius)");
    }
}

void validate_battery(const BatteryDistribution& b) {
    if (b.kind == BatteryDistribution::Kind::Fixed) {
        if (b.value <= 0.0) throw InvalidSpec("battery value must be > 0");
    } else {
        if (b.lo <= 0.0 || b.hi < b.lo)
            throw InvalidSpec("battery range must satisfy 0 < lo <= hi");
    }
}

double sample_battery(const BatteryDistribution& b, Sampler& rng) {
    if (b.kind == BatteryDistribution::Kind::Fixed) return b.value;
    return rng.uniform(b.lo, b.hi);
}

Vec3 sample_position(const SpawnRegion& region, double min_sep, double window,
                     double now, const std::vector<Arrival>& existing, Sampler& rng) {
    // separation is enforced in the horizontal projection as well: holding
    // drones hover at their spawn points and climb out vertically
    for (int tries = 0; tries < 5000; ++tries) {
        Vec3 p = rng.in_region(region);
        bool ok = true;
        for (const auto& a : existing) {
            if (window > 0.0 && now - a.t > window) continue;
            double dxy = std::hypot(a.position.x - p.x, a.position.y - p.y);
            if (a.position.distance_to(p) < min_sep || dxy < min_sep) {
                ok = false;
                break;
            }
        }
        if (ok) return p;
    }
    throw InvalidSpec("spawn region too crowded for min_spawn_separation");
}

}  // namespace

std::vector<Arrival> generate(const WorkloadSpec& spec, std::uint64_t seed) {
    validate_region(spec.spawn_region);
    validate_battery(spec.battery);
    if (spec.min_spawn_separation < 0.0)
        throw InvalidSpec("min_spawn_separation must be >= 0");

    std::vector<double> times;
    switch (spec.kind) {
        case WorkloadSpec::Kind::StagFlocks: {
            if (spec.h < 1) throw InvalidSpec("stag flock count h must be >= 1");
            if (spec.interval <= 0.0) throw InvalidSpec("staggering interval S must be > 0");
            if (spec.drones_per_flock < 1)
                throw InvalidSpec("drones_per_flock must be >= 1");
            for (int k = 0; k < spec.h; ++k)
                for (int j = 0; j < spec.drones_per_flock; ++j)
                    times.push_back(spec.interval * static_cast<double>(k));
            break;
        }
        case WorkloadSpec::Kind::Poisson: {
            if (spec.rate <= 0.0) throw InvalidSpec("poisson rate must be > 0");
            if (spec.horizon <= 0.0) throw InvalidSpec("poisson horizon must be > 0");
            break;  // sampled below, interleaved with the position stream
        }
        case WorkloadSpec::Kind::Burst: {
            if (spec.n < 1) throw InvalidSpec("burst size n must be >= 1");
            times.assign(static_cast<std::size_t>(spec.n), spec.at);
            break;
        }
        case WorkloadSpec::Kind::Replay:
            return read_arrivals_csv(spec.replay_path);
    }

    Sampler rng(seed);
    std::vector<Arrival> out;
    if (spec.kind == WorkloadSpec::Kind::Poisson) {
        double t = 0.0;
        while (true) {
            t += rng.exponential(spec.rate);
            if (t > spec.horizon) break;
            Arrival a;
            a.t = t;
            a.position = sample_position(spec.spawn_region, spec.min_spawn_separation,
                                         spec.separation_window, t, out, rng);
            a.battery = sample_battery(spec.battery, rng);
            out.push_back(std::move(a));
        }
    } else {
        out.reserve(times.size());
        for (double t : times) {
            Arrival a;
            a.t = t;
            a.position = sample_position(spec.spawn_region, spec.min_spawn_separation,
                                         spec.separation_window, t, out, rng);
            a.battery = sample_battery(spec.battery, rng);
            out.push_back(std::move(a));
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!spec.class_cycle.empty())
            out[i].drone_class = spec.class_cycle[i % spec.class_cycle.size()];
    return out;
}

RoseDeskDefaults rose_desk_scale(double scale) {
    if (!(scale > 0.0) || scale > 1.0)
        throw InvalidScale("scale must lie in (0, 1]");
    RoseDeskDefaults d;
    d.workload.kind = WorkloadSpec::Kind::StagFlocks;
    d.workload.h = static_cast<int>(std::lround(218.0 * scale));
    d.workload.interval = 1.36;
    d.workload.drones_per_flock = 1;
    d.workload.battery = {BatteryDistribution::Kind::Fixed, 300.0, 0.0, 0.0};
    d.opening_lambda = 1.0 / 1.36;
    d.initial_flight_time = 300.0;
    return d;
}

void write_arrivals_csv(const std::string& path, const std::vector<Arrival>& arrivals) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "# flightq-arrivals v1\n";
    out << "t,x,y,z,battery,class\n";
    char buf[256];
    for (const auto& a : arrivals) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,", a.t,
                      a.position.x, a.position.y, a.position.z, a.battery);
        out << buf << a.drone_class << "\n";
    }
}

std::vector<Arrival> read_arrivals_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::string line;
    std::vector<Arrival> out;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
        std::istringstream ss(line);
        Arrival a;
        char comma;
        if (!(ss >> a.t >> comma >> a.position.x >> comma >> a.position.y >> comma >>
              a.position.z >> comma >> a.battery))
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad arrival row");
        ss >> comma;
        std::getline(ss, a.drone_class);
        out.push_back(std::move(a));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Arrival& a, const Arrival& b) { return a.t < b.t; });
    return out;
}

}  // namespace flightq
