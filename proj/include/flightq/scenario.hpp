#pragma once

#include <string>
#include <vector>

#include "flightq/dispatch.hpp"
#include "flightq/sim.hpp"
#include "flightq/workload.hpp"

namespace flightq {

struct OpeningConfig {
    int id = -1;
    Vec3 position{};
    double lambda = 0.0;
    PatternSpec pattern;  // anchor is forced to `position` at load time
    Policy policy;
};

struct Scenario {
    int version = 1;
    std::string name = "scenario";
    SimConfig sim;
    std::vector<OpeningConfig> openings;
    DispatchConfig dispatch;
    WorkloadSpec workload;
};

// Parses and fully validates a scenario. JSON syntax problems and unknown
// fields/variants raise ParseError naming the offending field; semantic
// problems are collected (all of them, not just the first) into
// ConfigInvalid.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical JSON rendering; parse(render(s)) reproduces s.
std::string render_scenario(const Scenario& s);

// Every semantic problem in the scenario; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);

bool operator==(const Scenario& a, const Scenario& b);

}  // namespace flightq
