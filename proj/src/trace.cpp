#include "flightq/trace.hpp"

#include "json.hpp"

namespace flightq {

using nlohmann::json;

std::string to_json_line(const TraceHeader& h) {
    json j;
    j["record"] = "header";
    j["format"] = "flightq-trace";
    j["version"] = h.version;
    j["scenario"] = h.scenario;
    j["seed"] = h.seed;
    j["dt"] = h.dt;
    j["delta_min"] = h.delta_min;
    return j.dump();
}

std::string to_json_line(const TickRecord& r) {
    json j;
    j["t"] = r.t;
    j["drone_id"] = r.drone;
    j["x"] = r.position.x;
    j["y"] = r.position.y;
    j["z"] = r.position.z;
    j["state"] = to_string(r.state);
    j["slot"] = r.slot;
    j["opening"] = r.opening;
    j["remaining_s"] = r.remaining;
    return j.dump();
}

std::string to_json_line(const Event& e) {
    json j;
    j["t"] = e.t;
    j["event"] = e.kind;
    if (e.drone >= 0) j["drone_id"] = e.drone;
    if (e.drone_b >= 0) j["drone_b"] = e.drone_b;
    if (e.opening >= 0) j["opening"] = e.opening;
    if (e.slot >= 0) j["slot"] = e.slot;
    if (e.slot_b >= 0) j["slot_b"] = e.slot_b;
    if (e.has_position) {
        j["x"] = e.position.x;
        j["y"] = e.position.y;
        j["z"] = e.position.z;
    }
    if (e.battery >= 0.0) j["battery_s"] = e.battery;
    if (e.estimated_wait >= 0.0) j["estimated_wait_s"] = e.estimated_wait;
    if (e.travel_time >= 0.0) j["travel_time_s"] = e.travel_time;
    if (e.feasible >= 0) j["feasible"] = e.feasible != 0;
    if (e.transit >= 0.0) j["transit_s"] = e.transit;
    if (e.distance >= 0.0) j["distance_m"] = e.distance;
    if (!e.drone_class.empty()) j["class"] = e.drone_class;
    return j.dump();
}

FileSink::FileSink(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot open trace file " + path);
}

void FileSink::write_line(std::string_view line) {
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.put('\n');
}

void HashSink::write_line(std::string_view line) {
    for (unsigned char c : line) {
        hash_ ^= c;
        hash_ *= 1099511628211ull;
    }
    hash_ ^= static_cast<unsigned char>('\n');
    hash_ *= 1099511628211ull;
}

}  // namespace flightq
