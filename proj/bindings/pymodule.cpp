#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flightq/report.hpp"
#include "flightq/workload.hpp"

namespace py = pybind11;
using namespace flightq;

namespace {

Quat orientation_from(py::object axis, double angle_deg) {
    if (axis.is_none()) return Quat::identity();
    auto v = axis.cast<std::vector<double>>();
    if (v.size() != 3) throw InvalidSpec("orientation axis must have 3 components");
    return Quat::from_axis_angle({v[0], v[1], v[2]}, angle_deg * kPi / 180.0);
}

PatternSpec with_frame(PatternSpec spec, py::object anchor, py::object axis,
                       double angle_deg) {
    if (!anchor.is_none()) {
        auto a = anchor.cast<std::vector<double>>();
        if (a.size() != 3) throw InvalidSpec("anchor must have 3 components");
        spec.anchor = {a[0], a[1], a[2]};
    }
    spec.orientation = orientation_from(axis, angle_deg);
    return spec;
}

py::dict metrics_to_dict(const Metrics& m) {
    py::dict d;
    d["spawned"] = m.spawned;
    d["admitted"] = m.admitted;
    d["failed"] = m.failed;
    d["elapsed_s"] = m.elapsed;
    d["throughput_per_s"] = m.throughput();
    d["transit_mean_s"] = m.transit_mean();
    d["transit_max_s"] = m.transit_max;
    d["min_separation_m"] = m.min_separation;
    d["separation_violations"] = m.separation_violations;
    d["invariant_breaches"] = m.invariant_breaches;
    d["max_queue_len"] = m.max_queue_len;
    py::list per_opening;
    for (const auto& o : m.per_opening) {
        py::dict od;
        od["opening_id"] = o.opening_id;
        od["assigned"] = o.assigned;
        od["admitted"] = o.admitted;
        od["failed"] = o.failed;
        od["transit_max_s"] = o.transit_max;
        od["max_queue_len"] = o.max_queue_len;
        per_opening.append(od);
    }
    d["per_opening"] = per_opening;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "collision-free flight-pattern queues for drone swarms";

    py::register_exception<Error>(m, "FlightqError", PyExc_RuntimeError);

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
                   std::to_string(v.z) + ")";
        });

    py::class_<PatternSpec>(m, "PatternSpec")
        .def_property_readonly("slot_count", &PatternSpec::slot_count);

    py::class_<Pattern>(m, "Pattern")
        .def_property_readonly("slots",
                               [](const Pattern& p) {
                                   std::vector<std::tuple<double, double, double>> out;
                                   for (const auto& s : p.slots)
                                       out.emplace_back(s.x, s.y, s.z);
                                   return out;
                               })
        .def_property_readonly("leg_lengths",
                               [](const Pattern& p) { return p.leg_lengths(); })
        .def("leg_length", &Pattern::leg_length, py::arg("leg_index"))
        .def_property_readonly("slot_count", &Pattern::slot_count);

    m.def(
        "circle",
        [](double radius, int slots, py::object anchor, py::object axis, double angle_deg) {
            PatternSpec s;
            s.shape = CircleSpec{radius, slots};
            return with_frame(std::move(s), anchor, axis, angle_deg);
        },
        py::arg("radius"), py::arg("slots"), py::arg("anchor") = py::none(),
        py::arg("axis") = py::none(), py::arg("angle_deg") = 0.0);
    m.def(
        "ellipse",
        [](double semi_major, double semi_minor, int slots, py::object anchor,
           py::object axis, double angle_deg) {
            PatternSpec s;
            s.shape = EllipseSpec{semi_major, semi_minor, slots};
            return with_frame(std::move(s), anchor, axis, angle_deg);
        },
        py::arg("semi_major"), py::arg("semi_minor"), py::arg("slots"),
        py::arg("anchor") = py::none(), py::arg("axis") = py::none(),
        py::arg("angle_deg") = 0.0);
    m.def(
        "rectangle",
        [](double width, double height, int slots, py::object anchor, py::object axis,
           double angle_deg) {
            PatternSpec s;
            s.shape = RectangleSpec{width, height, slots};
            return with_frame(std::move(s), anchor, axis, angle_deg);
        },
        py::arg("width"), py::arg("height"), py::arg("slots"),
        py::arg("anchor") = py::none(), py::arg("axis") = py::none(),
        py::arg("angle_deg") = 0.0);
    m.def(
        "zigzag",
        [](double segment_length, int n_segments, double row_spacing, int slots,
           py::object anchor, py::object axis, double angle_deg) {
            PatternSpec s;
            s.shape = ZigZagSpec{segment_length, n_segments, row_spacing, slots};
            return with_frame(std::move(s), anchor, axis, angle_deg);
        },
        py::arg("segment_length"), py::arg("n_segments"), py::arg("row_spacing"),
        py::arg("slots"), py::arg("anchor") = py::none(), py::arg("axis") = py::none(),
        py::arg("angle_deg") = 0.0);
    m.def(
        "nested2d",
        [](std::vector<PatternSpec> layers, py::object anchor, py::object axis,
           double angle_deg) {
            PatternSpec s;
            s.shape = Nested2DSpec{std::move(layers)};
            return with_frame(std::move(s), anchor, axis, angle_deg);
        },
        py::arg("layers"), py::arg("anchor") = py::none(), py::arg("axis") = py::none(),
        py::arg("angle_deg") = 0.0);
    m.def(
        "stacked3d",
        [](std::vector<PatternSpec> layers, double layer_gap, py::object anchor,
           py::object axis, double angle_deg) {
            PatternSpec s;
            s.shape = Stacked3DSpec{std::move(layers), layer_gap};
            return with_frame(std::move(s), anchor, axis, angle_deg);
        },
        py::arg("layers"), py::arg("layer_gap"), py::arg("anchor") = py::none(),
        py::arg("axis") = py::none(), py::arg("angle_deg") = 0.0);

    m.def("build_pattern", &build_pattern, py::arg("spec"));
    m.def("required_speed", &required_speed, py::arg("pattern"), py::arg("lambda_"),
          py::arg("leg_index"));
    m.def("min_slot_clearance", &min_slot_clearance, py::arg("pattern"));

    py::class_<Scenario>(m, "Scenario")
        .def_readwrite("name", &Scenario::name)
        .def_property(
            "seed", [](const Scenario& s) { return s.sim.seed; },
            [](Scenario& s, std::uint64_t seed) { s.sim.seed = seed; })
        .def("render", &render_scenario);

    m.def("parse_scenario", &parse_scenario, py::arg("text"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def(
        "validate_scenario",
        [](const std::string& text) {
            try {
                Scenario s = parse_scenario(text);
                return std::vector<std::string>{};
            } catch (const ConfigInvalid& e) {
                return e.issues;
            } catch (const ParseError& e) {
                return std::vector<std::string>{e.what()};
            }
        },
        py::arg("text"),
        "Returns the list of problems in the scenario text; empty means valid.");

    m.def(
        "run_scenario",
        [](const Scenario& scenario, py::object seed, py::object trace_path) {
            Scenario s = scenario;
            if (!seed.is_none()) s.sim.seed = seed.cast<std::uint64_t>();
            RunResult result;
            if (!trace_path.is_none()) {
                FileSink sink(trace_path.cast<std::string>());
                result = run(s, &sink);
            } else {
                result = run(s);
            }
            return metrics_to_dict(result.metrics);
        },
        py::arg("scenario"), py::arg("seed") = py::none(),
        py::arg("trace_path") = py::none());

    m.def(
        "generate_workload",
        [](const Scenario& scenario, py::object seed) {
            std::uint64_t s =
                seed.is_none() ? scenario.sim.seed : seed.cast<std::uint64_t>();
            auto arrivals = generate(scenario.workload, s);
            std::vector<std::tuple<double, std::tuple<double, double, double>, double>>
                out;
            for (const auto& a : arrivals)
                out.emplace_back(
                    a.t, std::make_tuple(a.position.x, a.position.y, a.position.z),
                    a.battery);
            return out;
        },
        py::arg("scenario"), py::arg("seed") = py::none());

    m.def(
        "rose_desk_scale",
        [](double scale) {
            RoseDeskDefaults d = rose_desk_scale(scale);
            py::dict out;
            out["h"] = d.workload.h;
            out["interval_s"] = d.workload.interval;
            out["battery_s"] = d.workload.battery.value;
            out["opening_lambda"] = d.opening_lambda;
            out["initial_flight_time_s"] = d.initial_flight_time;
            return out;
        },
        py::arg("scale"));

    m.attr("__version__") = "1.0.0";
}
