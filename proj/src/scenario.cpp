#include "flightq/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace flightq {

using nlohmann::json;

ConfigInvalid::ConfigInvalid(std::vector<std::string> list)
    : Error([&list] {
          std::string msg = "scenario validation failed:";
          for (const auto& s : list) msg += "\n  - " + s;
          return msg;
      }()),
      issues(std::move(list)) {}

namespace {

struct Walk {
    std::vector<std::string> issues;

    void bad(const std::string& path, const std::string& what) {
        issues.push_back(path + ": " + what);
    }

    void check_keys(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
        if (!obj.is_object()) return;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool known = false;
            for (const char* k : allowed)
                if (it.key() == k) {
                    known = true;
                    break;
                }
            if (!known) bad(path + "." + it.key(), "unknown field");
        }
    }

    bool require_object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        bad(path, "expected an object");
        return false;
    }

    double num(const json& obj, const std::string& path, const char* key,
               bool required, double def = 0.0) {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) bad(path + "." + key, "missing required number");
            return def;
        }
        const json& v = obj[key];
        if (!v.is_number()) {
            bad(path + "." + key, "expected a number");
            return def;
        }
        return v.get<double>();
    }

    std::int64_t integer(const json& obj, const std::string& path, const char* key,
                         bool required, std::int64_t def = 0) {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) bad(path + "." + key, "missing required integer");
            return def;
        }
        const json& v = obj[key];
        if (!v.is_number_integer()) {
            bad(path + "." + key, "expected an integer");
            return def;
        }
        return v.get<std::int64_t>();
    }

    std::string text(const json& obj, const std::string& path, const char* key,
                     bool required, const std::string& def = "") {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) bad(path + "." + key, "missing required string");
            return def;
        }
        const json& v = obj[key];
        if (!v.is_string()) {
            bad(path + "." + key, "expected a string");
            return def;
        }
        return v.get<std::string>();
    }

    bool boolean(const json& obj, const std::string& path, const char* key, bool def) {
        if (!obj.is_object() || !obj.contains(key)) return def;
        const json& v = obj[key];
        if (!v.is_boolean()) {
            bad(path + "." + key, "expected a boolean");
            return def;
        }
        return v.get<bool>();
    }

    Vec3 vec3(const json& obj, const std::string& path, const char* key,
              bool required, Vec3 def = {}) {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) bad(path + "." + key, "missing required [x, y, z]");
            return def;
        }
        const json& v = obj[key];
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
            !v[1].is_number() || !v[2].is_number()) {
            bad(path + "." + key, "expected [x, y, z]");
            return def;
        }
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
};

PatternSpec walk_pattern(Walk& w, const json& j, const std::string& path);

PatternSpec walk_leaf_or_nested(Walk& w, const json& j, const std::string& path,
                                bool allow_nested) {
    PatternSpec spec;
    if (!w.require_object(j, path)) return spec;
    std::string type = w.text(j, path, "type", true);
    if (type == "circle") {
        w.check_keys(j, path, {"type", "radius", "slots"});
        CircleSpec c;
        c.radius = w.num(j, path, "radius", true);
        c.slots = static_cast<int>(w.integer(j, path, "slots", true));
        spec.shape = c;
    } else if (type == "ellipse") {
        w.check_keys(j, path, {"type", "semi_major", "semi_minor", "slots"});
        EllipseSpec e;
        e.semi_major = w.num(j, path, "semi_major", true);
        e.semi_minor = w.num(j, path, "semi_minor", true);
        e.slots = static_cast<int>(w.integer(j, path, "slots", true));
        spec.shape = e;
    } else if (type == "rectangle") {
        w.check_keys(j, path, {"type", "width", "height", "slots"});
        RectangleSpec r;
        r.width = w.num(j, path, "width", true);
        r.height = w.num(j, path, "height", true);
        r.slots = static_cast<int>(w.integer(j, path, "slots", true));
        spec.shape = r;
    } else if (type == "zigzag") {
        w.check_keys(j, path, {"type", "segment_length", "n_segments", "row_spacing", "slots"});
        ZigZagSpec z;
        z.segment_length = w.num(j, path, "segment_length", true);
        z.n_segments = static_cast<int>(w.integer(j, path, "n_segments", true));
        z.row_spacing = w.num(j, path, "row_spacing", true);
        z.slots = static_cast<int>(w.integer(j, path, "slots", true));
        spec.shape = z;
    } else if (type == "nested2d" && allow_nested) {
        w.check_keys(j, path, {"type", "layers"});
        Nested2DSpec n;
        if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
            w.bad(path + ".layers", "expected a non-empty array of layer patterns");
        } else {
            int i = 0;
            for (const auto& layer : j["layers"])
                n.layers.push_back(walk_leaf_or_nested(
                    w, layer, path + ".layers[" + std::to_string(i++) + "]", false));
        }
        spec.shape = std::move(n);
    } else {
        w.bad(path + ".type", "unknown pattern variant '" + type + "'");
    }
    return spec;
}

PatternSpec walk_pattern(Walk& w, const json& j, const std::string& path) {
    if (j.is_object() && j.contains("type") && j["type"].is_string() &&
        j["type"].get<std::string>() == "stacked3d") {
        w.check_keys(j, path, {"type", "layers", "layer_gap"});
        Stacked3DSpec s;
        s.layer_gap = w.num(j, path, "layer_gap", true);
        if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
            w.bad(path + ".layers", "expected a non-empty array of layer patterns");
        } else {
            int i = 0;
            for (const auto& layer : j["layers"])
                s.layers.push_back(walk_leaf_or_nested(
                    w, layer, path + ".layers[" + std::to_string(i++) + "]", true));
        }
        PatternSpec spec;
        spec.shape = std::move(s);
        return spec;
    }
    return walk_leaf_or_nested(w, j, path, true);
}

Policy walk_policy(Walk& w, const json& j, const std::string& path) {
    Policy p;
    if (!w.require_object(j, path)) return p;
    w.check_keys(j, path, {"kind", "swap_duration", "lateral_offset"});
    std::string kind = w.text(j, path, "kind", true, "fifo");
    if (kind == "fifo") {
        p.kind = PolicyKind::Fifo;
    } else if (kind == "lrf") {
        p.kind = PolicyKind::LeastRemainingFlightTimeFirst;
    } else {
        w.bad(path + ".kind", "unknown policy '" + kind + "' (fifo or lrf)");
    }
    p.swap_duration = w.num(j, path, "swap_duration", false, 0.0);
    p.lateral_offset = w.num(j, path, "lateral_offset", false, 0.0);
    return p;
}

Quat walk_orientation(Walk& w, const json& obj, const std::string& path) {
    if (!obj.contains("orientation")) return Quat::identity();
    const json& j = obj["orientation"];
    std::string p = path + ".orientation";
    if (!w.require_object(j, p)) return Quat::identity();
    w.check_keys(j, p, {"axis", "angle_deg"});
    Vec3 axis = w.vec3(j, p, "axis", true, {0, 0, 1});
    double deg = w.num(j, p, "angle_deg", true, 0.0);
    if (axis.norm() <= 0.0) {
        w.bad(p + ".axis", "axis must be nonzero");
        return Quat::identity();
    }
    return Quat::from_axis_angle(axis, deg * kPi / 180.0);
}

SpawnRegion walk_region(Walk& w, const json& j, const std::string& path) {
    SpawnRegion r;
    if (!w.require_object(j, path)) return r;
    std::string type = w.text(j, path, "type", true);
    if (type == "box") {
        w.check_keys(j, path, {"type", "min", "max"});
        r.kind = SpawnRegion::Kind::Box;
        r.box_min = w.vec3(j, path, "min", true);
        r.box_max = w.vec3(j, path, "max", true);
    } else if (type == "sphere") {
        w.check_keys(j, path, {"type", "center", "radius", "inner_radius"});
        r.kind = SpawnRegion::Kind::Sphere;
        r.center = w.vec3(j, path, "center", true);
        r.radius = w.num(j, path, "radius", true);
        r.inner_radius = w.num(j, path, "inner_radius", false, 0.0);
    } else {
        w.bad(path + ".type", "unknown spawn region '" + type + "' (box or sphere)");
    }
    return r;
}

BatteryDistribution walk_battery(Walk& w, const json& obj, const std::string& path,
                                 double default_value) {
    BatteryDistribution b;
    b.kind = BatteryDistribution::Kind::Fixed;
    b.value = default_value;
    if (!obj.contains("battery")) return b;
    const json& j = obj["battery"];
    std::string p = path + ".battery";
    if (!w.require_object(j, p)) return b;
    std::string type = w.text(j, p, "type", true);
    if (type == "fixed") {
        w.check_keys(j, p, {"type", "value"});
        b.kind = BatteryDistribution::Kind::Fixed;
        b.value = w.num(j, p, "value", true);
    } else if (type == "uniform") {
        w.check_keys(j, p, {"type", "min", "max"});
        b.kind = BatteryDistribution::Kind::Uniform;
        b.lo = w.num(j, p, "min", true);
        b.hi = w.num(j, p, "max", true);
    } else {
        w.bad(p + ".type", "unknown battery distribution '" + type + "'");
    }
    return b;
}

WorkloadSpec walk_workload(Walk& w, const json& j, const std::string& path,
                           double default_battery) {
    WorkloadSpec spec;
    if (!w.require_object(j, path)) return spec;
    std::string kind = w.text(j, path, "kind", true);
    static const std::initializer_list<const char*> common = {
        "kind", "spawn_region", "battery", "min_spawn_separation",
        "separation_window", "class_cycle", "h", "interval", "drones_per_flock",
        "rate", "horizon", "n", "at", "path"};
    w.check_keys(j, path, common);
    if (kind == "stag_flocks") {
        spec.kind = WorkloadSpec::Kind::StagFlocks;
        spec.h = static_cast<int>(w.integer(j, path, "h", true));
        spec.interval = w.num(j, path, "interval", true);
        spec.drones_per_flock =
            static_cast<int>(w.integer(j, path, "drones_per_flock", false, 1));
    } else if (kind == "poisson") {
        spec.kind = WorkloadSpec::Kind::Poisson;
        spec.rate = w.num(j, path, "rate", true);
        spec.horizon = w.num(j, path, "horizon", true);
    } else if (kind == "burst") {
        spec.kind = WorkloadSpec::Kind::Burst;
        spec.n = static_cast<int>(w.integer(j, path, "n", true));
        spec.at = w.num(j, path, "at", false, 0.0);
    } else if (kind == "replay") {
        spec.kind = WorkloadSpec::Kind::Replay;
        spec.replay_path = w.text(j, path, "path", true);
    } else {
        w.bad(path + ".kind", "unknown workload kind '" + kind + "'");
    }
    if (j.contains("spawn_region"))
        spec.spawn_region = walk_region(w, j["spawn_region"], path + ".spawn_region");
    else if (kind != "replay")
        w.bad(path + ".spawn_region", "missing required spawn region");
    spec.battery = walk_battery(w, j, path, default_battery);
    spec.min_spawn_separation = w.num(j, path, "min_spawn_separation", false, 0.5);
    spec.separation_window = w.num(j, path, "separation_window", false, -1.0);
    if (j.contains("class_cycle")) {
        const json& cc = j["class_cycle"];
        if (!cc.is_array()) {
            w.bad(path + ".class_cycle", "expected an array of class names");
        } else {
            for (const auto& c : cc) {
                if (!c.is_string()) {
                    w.bad(path + ".class_cycle", "expected strings");
                    break;
                }
                spec.class_cycle.push_back(c.get<std::string>());
            }
        }
    }
    return spec;
}

DispatchConfig walk_dispatch(Walk& w, const json& j, const std::string& path) {
    DispatchConfig d;
    if (!w.require_object(j, path)) return d;
    w.check_keys(j, path,
                 {"mode", "lambda_total", "weights", "count_inbound", "partition", "groups"});
    std::string mode = w.text(j, path, "mode", true, "shared");
    if (j.contains("weights")) {
        const json& ww = j["weights"];
        std::string p = path + ".weights";
        if (w.require_object(ww, p)) {
            w.check_keys(ww, p, {"wait", "travel"});
            d.w_wait = w.num(ww, p, "wait", false, 1.0);
            d.w_travel = w.num(ww, p, "travel", false, 1.0);
        }
    }
    d.count_inbound = w.boolean(j, path, "count_inbound", false);

    auto walk_partition = [&](const json& obj, const std::string& p) {
        std::map<std::string, int> out;
        if (!obj.is_object()) {
            w.bad(p, "expected an object mapping class -> opening id");
            return out;
        }
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!it.value().is_number_integer()) {
                w.bad(p + "." + it.key(), "expected an opening id");
                continue;
            }
            out[it.key()] = it.value().get<int>();
        }
        return out;
    };

    if (mode == "shared") {
        d.mode = DispatchMode::Shared;
        d.lambda_total = w.num(j, path, "lambda_total", true);
    } else if (mode == "exclusive") {
        d.mode = DispatchMode::Exclusive;
        if (j.contains("partition"))
            d.partition = walk_partition(j["partition"], path + ".partition");
        else
            w.bad(path + ".partition", "exclusive mode needs a class partition");
    } else if (mode == "hybrid") {
        d.mode = DispatchMode::Hybrid;
        if (!j.contains("groups") || !j["groups"].is_array() || j["groups"].empty()) {
            w.bad(path + ".groups", "hybrid mode needs a non-empty group list");
        } else {
            int i = 0;
            for (const auto& gj : j["groups"]) {
                std::string p = path + ".groups[" + std::to_string(i++) + "]";
                HybridGroup g;
                if (!w.require_object(gj, p)) continue;
                w.check_keys(gj, p,
                             {"mode", "openings", "classes", "lambda_total", "partition"});
                std::string gm = w.text(gj, p, "mode", true, "shared");
                if (gm == "shared") {
                    g.mode = DispatchMode::Shared;
                    g.lambda_total = w.num(gj, p, "lambda_total", true);
                } else if (gm == "exclusive") {
                    g.mode = DispatchMode::Exclusive;
                    if (gj.contains("partition"))
                        g.partition = walk_partition(gj["partition"], p + ".partition");
                    else
                        w.bad(p + ".partition", "exclusive group needs a partition");
                } else {
                    w.bad(p + ".mode", "group mode must be shared or exclusive");
                }
                if (gj.contains("openings") && gj["openings"].is_array())
                    for (const auto& v : gj["openings"])
                        if (v.is_number_integer()) g.openings.push_back(v.get<int>());
                if (g.openings.empty()) w.bad(p + ".openings", "group needs opening ids");
                if (gj.contains("classes") && gj["classes"].is_array())
                    for (const auto& v : gj["classes"])
                        if (v.is_string()) g.classes.push_back(v.get<std::string>());
                if (g.classes.empty()) w.bad(p + ".classes", "group needs drone classes");
                d.groups.push_back(std::move(g));
            }
        }
    } else {
        w.bad(path + ".mode", "unknown dispatch mode '" + mode + "'");
    }
    return d;
}

Scenario walk_scenario(Walk& w, const json& j) {
    Scenario s;
    if (!w.require_object(j, "scenario")) return s;
    w.check_keys(j, "scenario",
                 {"version", "name", "sim", "openings", "dispatch", "workload"});
    s.version = static_cast<int>(w.integer(j, "scenario", "version", true, 1));
    s.name = w.text(j, "scenario", "name", false, "scenario");

    if (j.contains("sim") && w.require_object(j["sim"], "sim")) {
        const json& sj = j["sim"];
        w.check_keys(sj, "sim",
                     {"dt", "delta_min", "v_max", "initial_flight_time", "horizon",
                      "seed", "approach_offset", "approach_lanes"});
        s.sim.dt = w.num(sj, "sim", "dt", false, 0.01);
        s.sim.delta_min = w.num(sj, "sim", "delta_min", false, 0.1);
        s.sim.v_max = w.num(sj, "sim", "v_max", false, 1.0);
        s.sim.initial_flight_time = w.num(sj, "sim", "initial_flight_time", false, 300.0);
        s.sim.horizon = w.num(sj, "sim", "horizon", true);
        s.sim.seed = static_cast<std::uint64_t>(w.integer(sj, "sim", "seed", false, 0));
        s.sim.approach_offset = w.num(sj, "sim", "approach_offset", false, 0.0);
        s.sim.approach_lanes =
            static_cast<int>(w.integer(sj, "sim", "approach_lanes", false, 8));
    } else if (!j.contains("sim")) {
        w.bad("sim", "missing required section");
    }

    if (j.contains("openings") && j["openings"].is_array() && !j["openings"].empty()) {
        int i = 0;
        for (const auto& oj : j["openings"]) {
            std::string p = "openings[" + std::to_string(i++) + "]";
            OpeningConfig oc;
            if (!w.require_object(oj, p)) continue;
            w.check_keys(oj, p,
                         {"id", "position", "lambda", "pattern", "orientation", "policy"});
            oc.id = static_cast<int>(w.integer(oj, p, "id", true));
            oc.position = w.vec3(oj, p, "position", true);
            oc.lambda = w.num(oj, p, "lambda", true);
            if (oj.contains("pattern"))
                oc.pattern = walk_pattern(w, oj["pattern"], p + ".pattern");
            else
                w.bad(p + ".pattern", "missing required pattern");
            oc.pattern.anchor = oc.position;
            oc.pattern.orientation = walk_orientation(w, oj, p);
            if (oj.contains("policy")) oc.policy = walk_policy(w, oj["policy"], p + ".policy");
            s.openings.push_back(std::move(oc));
        }
    } else {
        w.bad("openings", "expected a non-empty array of openings");
    }

    if (j.contains("dispatch"))
        s.dispatch = walk_dispatch(w, j["dispatch"], "dispatch");
    else
        w.bad("dispatch", "missing required section");

    if (j.contains("workload"))
        s.workload = walk_workload(w, j["workload"], "workload", s.sim.initial_flight_time);
    else
        w.bad("workload", "missing required section");
    return s;
}

json render_vec3(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json render_pattern(const PatternSpec& spec) {
    json j;
    std::visit(
        [&](const auto& sh) {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, CircleSpec>) {
                j["type"] = "circle";
                j["radius"] = sh.radius;
                j["slots"] = sh.slots;
            } else if constexpr (std::is_same_v<T, EllipseSpec>) {
                j["type"] = "ellipse";
                j["semi_major"] = sh.semi_major;
                j["semi_minor"] = sh.semi_minor;
                j["slots"] = sh.slots;
            } else if constexpr (std::is_same_v<T, RectangleSpec>) {
                j["type"] = "rectangle";
                j["width"] = sh.width;
                j["height"] = sh.height;
                j["slots"] = sh.slots;
            } else if constexpr (std::is_same_v<T, ZigZagSpec>) {
                j["type"] = "zigzag";
                j["segment_length"] = sh.segment_length;
                j["n_segments"] = sh.n_segments;
                j["row_spacing"] = sh.row_spacing;
                j["slots"] = sh.slots;
            } else if constexpr (std::is_same_v<T, Nested2DSpec>) {
                j["type"] = "nested2d";
                json layers = json::array();
                for (const auto& l : sh.layers) layers.push_back(render_pattern(l));
                j["layers"] = std::move(layers);
            } else {
                j["type"] = "stacked3d";
                j["layer_gap"] = sh.layer_gap;
                json layers = json::array();
                for (const auto& l : sh.layers) layers.push_back(render_pattern(l));
                j["layers"] = std::move(layers);
            }
        },
        spec.shape);
    return j;
}

json render_region(const SpawnRegion& r) {
    json j;
    if (r.kind == SpawnRegion::Kind::Box) {
        j["type"] = "box";
        j["min"] = render_vec3(r.box_min);
        j["max"] = render_vec3(r.box_max);
    } else {
        j["type"] = "sphere";
        j["center"] = render_vec3(r.center);
        j["radius"] = r.radius;
        j["inner_radius"] = r.inner_radius;
    }
    return j;
}

}  // namespace

std::string render_scenario(const Scenario& s) {
    json j;
    j["version"] = s.version;
    j["name"] = s.name;
    json sim;
    sim["dt"] = s.sim.dt;
    sim["delta_min"] = s.sim.delta_min;
    sim["v_max"] = s.sim.v_max;
    sim["initial_flight_time"] = s.sim.initial_flight_time;
    sim["horizon"] = s.sim.horizon;
    sim["seed"] = s.sim.seed;
    sim["approach_offset"] = s.sim.approach_offset;
    sim["approach_lanes"] = s.sim.approach_lanes;
    j["sim"] = std::move(sim);

    json openings = json::array();
    for (const auto& oc : s.openings) {
        json oj;
        oj["id"] = oc.id;
        oj["position"] = render_vec3(oc.position);
        oj["lambda"] = oc.lambda;
        oj["pattern"] = render_pattern(oc.pattern);
        const Quat& q = oc.pattern.orientation;
        if (!(q.w == 1.0 && q.x == 0.0 && q.y == 0.0 && q.z == 0.0)) {
            // recover an axis-angle form for readability
            double angle = 2.0 * std::acos(std::clamp(q.w, -1.0, 1.0));
            Vec3 axis{q.x, q.y, q.z};
            double n = axis.norm();
            json orient;
            orient["axis"] = n > 1e-12 ? render_vec3(axis * (1.0 / n))
                                       : render_vec3({0, 0, 1});
            orient["angle_deg"] = angle * 180.0 / kPi;
            oj["orientation"] = std::move(orient);
        }
        json pj;
        pj["kind"] = oc.policy.kind == PolicyKind::Fifo ? "fifo" : "lrf";
        if (oc.policy.kind == PolicyKind::LeastRemainingFlightTimeFirst) {
            pj["swap_duration"] = oc.policy.swap_duration;
            pj["lateral_offset"] = oc.policy.lateral_offset;
        }
        oj["policy"] = std::move(pj);
        openings.push_back(std::move(oj));
    }
    j["openings"] = std::move(openings);

    json dj;
    switch (s.dispatch.mode) {
        case DispatchMode::Shared:
            dj["mode"] = "shared";
            dj["lambda_total"] = s.dispatch.lambda_total;
            break;
        case DispatchMode::Exclusive: {
            dj["mode"] = "exclusive";
            json part;
            for (const auto& [k, v] : s.dispatch.partition) part[k] = v;
            dj["partition"] = std::move(part);
            break;
        }
        case DispatchMode::Hybrid: {
            dj["mode"] = "hybrid";
            json groups = json::array();
            for (const auto& g : s.dispatch.groups) {
                json gj;
                gj["mode"] = g.mode == DispatchMode::Shared ? "shared" : "exclusive";
                gj["openings"] = g.openings;
                gj["classes"] = g.classes;
                if (g.mode == DispatchMode::Shared) {
                    gj["lambda_total"] = g.lambda_total;
                } else {
                    json part;
                    for (const auto& [k, v] : g.partition) part[k] = v;
                    gj["partition"] = std::move(part);
                }
                groups.push_back(std::move(gj));
            }
            dj["groups"] = std::move(groups);
            break;
        }
    }
    json weights;
    weights["wait"] = s.dispatch.w_wait;
    weights["travel"] = s.dispatch.w_travel;
    dj["weights"] = std::move(weights);
    dj["count_inbound"] = s.dispatch.count_inbound;
    j["dispatch"] = std::move(dj);

    json wj;
    switch (s.workload.kind) {
        case WorkloadSpec::Kind::StagFlocks:
            wj["kind"] = "stag_flocks";
            wj["h"] = s.workload.h;
            wj["interval"] = s.workload.interval;
            wj["drones_per_flock"] = s.workload.drones_per_flock;
            break;
        case WorkloadSpec::Kind::Poisson:
            wj["kind"] = "poisson";
            wj["rate"] = s.workload.rate;
            wj["horizon"] = s.workload.horizon;
            break;
        case WorkloadSpec::Kind::Burst:
            wj["kind"] = "burst";
            wj["n"] = s.workload.n;
            wj["at"] = s.workload.at;
            break;
        case WorkloadSpec::Kind::Replay:
            wj["kind"] = "replay";
            wj["path"] = s.workload.replay_path;
            break;
    }
    if (s.workload.kind != WorkloadSpec::Kind::Replay)
        wj["spawn_region"] = render_region(s.workload.spawn_region);
    json bj;
    if (s.workload.battery.kind == BatteryDistribution::Kind::Fixed) {
        bj["type"] = "fixed";
        bj["value"] = s.workload.battery.value;
    } else {
        bj["type"] = "uniform";
        bj["min"] = s.workload.battery.lo;
        bj["max"] = s.workload.battery.hi;
    }
    wj["battery"] = std::move(bj);
    wj["min_spawn_separation"] = s.workload.min_spawn_separation;
    wj["separation_window"] = s.workload.separation_window;
    if (!s.workload.class_cycle.empty()) wj["class_cycle"] = s.workload.class_cycle;
    j["workload"] = std::move(wj);

    return j.dump(2);
}

bool operator==(const Scenario& a, const Scenario& b) {
    return render_scenario(a) == render_scenario(b);
}

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> issues;
    auto bad = [&issues](const std::string& msg) { issues.push_back(msg); };

    if (s.version != 1) bad("version: unrecognized scenario version");

    const SimConfig& c = s.sim;
    if (!(c.dt > 0.0)) bad("sim.dt: must be > 0");
    if (!(c.delta_min > 0.0)) bad("sim.delta_min: must be > 0");
    if (!(c.v_max > 0.0)) bad("sim.v_max: must be > 0");
    if (!(c.initial_flight_time > 0.0)) bad("sim.initial_flight_time: must be > 0");
    if (!(c.horizon > 0.0)) bad("sim.horizon: must be > 0");
    if (c.approach_lanes < 1) bad("sim.approach_lanes: must be >= 1");
    if (c.dt > 0.0 && c.delta_min > 0.0 && c.v_max * c.dt >= c.delta_min / 2.0)
        bad("sim.dt: too coarse, v_max * dt must stay below delta_min / 2");

    if (s.openings.empty()) bad("openings: at least one opening is required");
    std::set<int> ids;
    std::vector<std::pair<Vec3, double>> bounding;  // center, radius per opening
    for (std::size_t i = 0; i < s.openings.size(); ++i) {
        const OpeningConfig& oc = s.openings[i];
        std::string p = "openings[" + std::to_string(i) + "]";
        if (!ids.insert(oc.id).second) bad(p + ".id: duplicate opening id");
        if (!(oc.lambda > 0.0)) bad(p + ".lambda: admission rate must be > 0");
        if (oc.policy.swap_duration < 0.0) bad(p + ".policy.swap_duration: must be >= 0");

        Pattern pattern;
        bool built = false;
        try {
            PatternSpec spec = oc.pattern;
            spec.anchor = oc.position;
            pattern = build_pattern(spec);
            built = true;
        } catch (const Error& e) {
            bad(p + ".pattern: " + e.what());
        }
        if (!built || !(oc.lambda > 0.0)) continue;
        bounding.emplace_back(pattern.bounding_center(), pattern.bounding_radius());

        if (c.dt > 1.0 / oc.lambda)
            bad(p + ": sim.dt exceeds the admission interval 1/lambda");
        double max_leg = pattern.max_leg_length();
        if (max_leg * oc.lambda > c.v_max + 1e-9)
            bad(p + ".pattern: required leg speed " + std::to_string(max_leg * oc.lambda) +
                " m/s exceeds v_max");
        if (oc.policy.kind == PolicyKind::LeastRemainingFlightTimeFirst) {
            if (!(oc.policy.lateral_offset > 0.0))
                bad(p + ".policy.lateral_offset: must be > 0 under lrf");
            if (pattern.slot_count() >= 2) {
                double min_leg = *std::min_element(pattern.leg_lengths().begin(),
                                                   pattern.leg_lengths().end());
                if (oc.policy.lateral_offset >= min_leg / 2.0)
                    bad(p + ".policy.lateral_offset: must stay below half the shortest leg");
            }
            if (oc.policy.swap_duration > 1.0 / oc.lambda)
                bad(p + ".policy.swap_duration: exceeds the admission interval, swaps "
                        "would never fit");
            if (oc.policy.swap_duration > 0.0) {
                double arc = kPi * (max_leg / 2.0 + oc.policy.lateral_offset);
                if (arc / oc.policy.swap_duration > c.v_max + 1e-9)
                    bad(p + ".policy.swap_duration: too short, the swap arc needs more "
                            "than v_max");
            }
        }
    }

    switch (s.dispatch.mode) {
        case DispatchMode::Shared: {
            double sum = 0.0;
            for (const auto& oc : s.openings) sum += oc.lambda;
            double residual = sum - s.dispatch.lambda_total;
            if (std::abs(residual) >
                1e-12 * std::max(std::abs(s.dispatch.lambda_total), 1e-300))
                bad("dispatch.lambda_total: RateMismatch, opening rates sum to " +
                    std::to_string(sum) + ", residual " + std::to_string(residual));
            break;
        }
        case DispatchMode::Exclusive: {
            if (s.dispatch.partition.empty())
                bad("dispatch.partition: empty class partition");
            for (const auto& [cls, oid] : s.dispatch.partition)
                if (!ids.count(oid))
                    bad("dispatch.partition." + cls + ": unknown opening id");
            std::vector<std::string> classes = s.workload.class_cycle;
            if (classes.empty()) classes.push_back("");
            for (const auto& cls : classes)
                if (!s.dispatch.partition.count(cls))
                    bad("dispatch.partition: workload class '" + cls + "' is unmapped");
            break;
        }
        case DispatchMode::Hybrid: {
            std::set<int> grouped;
            std::set<std::string> classes_seen;
            for (std::size_t gi = 0; gi < s.dispatch.groups.size(); ++gi) {
                const HybridGroup& g = s.dispatch.groups[gi];
                std::string p = "dispatch.groups[" + std::to_string(gi) + "]";
                for (int oid : g.openings) {
                    if (!ids.count(oid)) bad(p + ".openings: unknown opening id");
                    if (!grouped.insert(oid).second)
                        bad(p + ".openings: opening " + std::to_string(oid) +
                            " appears in two groups");
                }
                for (const auto& cls : g.classes)
                    if (!classes_seen.insert(cls).second)
                        bad(p + ".classes: class '" + cls + "' appears in two groups");
                if (g.mode == DispatchMode::Shared) {
                    double sum = 0.0;
                    for (const auto& oc : s.openings)
                        if (std::find(g.openings.begin(), g.openings.end(), oc.id) !=
                            g.openings.end())
                            sum += oc.lambda;
                    if (std::abs(sum - g.lambda_total) >
                        1e-12 * std::max(std::abs(g.lambda_total), 1e-300))
                        bad(p + ".lambda_total: RateMismatch within the group");
                } else {
                    for (const auto& [cls, oid] : g.partition)
                        if (std::find(g.openings.begin(), g.openings.end(), oid) ==
                            g.openings.end())
                            bad(p + ".partition." + cls + ": target outside the group");
                    for (const auto& cls : g.classes)
                        if (!g.partition.count(cls))
                            bad(p + ".partition: class '" + cls + "' is unmapped");
                }
            }
            if (grouped.size() != ids.size())
                bad("dispatch.groups: groups must partition the opening set");
            std::vector<std::string> classes = s.workload.class_cycle;
            if (classes.empty()) classes.push_back("");
            for (const auto& cls : classes)
                if (!classes_seen.count(cls))
                    bad("dispatch.groups: workload class '" + cls + "' belongs to no group");
            break;
        }
    }

    try {
        auto arrivals = generate(s.workload, s.sim.seed);
        // spawn points must stay outside every pattern's bounding sphere
        for (const auto& a : arrivals) {
            for (const auto& [center, radius] : bounding) {
                if (a.position.distance_to(center) < radius + c.delta_min) {
                    bad("workload.spawn_region: spawn points intrude into a pattern's "
                        "bounding sphere");
                    goto done;
                }
            }
        }
    done:;
    } catch (const Error& e) {
        bad(std::string("workload: ") + e.what());
    }

    return issues;
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON syntax: ") + e.what());
    }
    Walk w;
    Scenario s = walk_scenario(w, j);
    if (!w.issues.empty()) {
        std::string msg = "scenario parse failed:";
        for (const auto& i : w.issues) msg += "\n  - " + i;
        throw ParseError(msg);
    }
    auto sem = validate_scenario(s);
    if (!sem.empty()) throw ConfigInvalid(std::move(sem));
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace flightq
