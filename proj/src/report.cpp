#include "flightq/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace flightq {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void write_metrics_csv(const std::string& path, const Metrics& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "# flightq-metrics v1\n";
    out << "scope,opening_id,spawned,assigned,admitted,failed,throughput_per_s,"
           "transit_mean_s,transit_max_s,min_separation_m,separation_violations,"
           "invariant_breaches,max_queue_len,elapsed_s\n";
    out << "run,," << m.spawned << "," << "," << m.admitted << "," << m.failed << ","
        << fmt(m.throughput()) << "," << fmt(m.transit_mean()) << ","
        << fmt(m.transit_max) << "," << fmt(m.min_separation) << ","
        << m.separation_violations << "," << m.invariant_breaches << ","
        << m.max_queue_len << "," << fmt(m.elapsed) << "\n";
    for (const auto& o : m.per_opening) {
        double throughput = m.elapsed > 0.0 ? o.admitted / m.elapsed : 0.0;
        double mean = o.admitted > 0 ? o.transit_sum / o.admitted : 0.0;
        out << "opening," << o.opening_id << ",," << o.assigned << "," << o.admitted
            << "," << o.failed << "," << fmt(throughput) << "," << fmt(mean) << ","
            << fmt(o.transit_max) << ",,,," << o.max_queue_len << ","
            << fmt(m.elapsed) << "\n";
    }
}

TraceSummary summarize_trace(const std::string& trace_path) {
    std::ifstream in(trace_path);
    if (!in) throw Error("cannot read trace " + trace_path);

    TraceSummary s;
    std::map<int, std::size_t> opening_rows;  // opening id -> per_opening index
    auto opening_slot = [&](int id) -> OpeningMetrics& {
        auto it = opening_rows.find(id);
        if (it == opening_rows.end()) {
            opening_rows[id] = s.metrics.per_opening.size();
            OpeningMetrics om;
            om.opening_id = id;
            s.metrics.per_opening.push_back(om);
            return s.metrics.per_opening.back();
        }
        return s.metrics.per_opening[it->second];
    };

    struct TickGroup {
        std::vector<Vec3> positions;
        TraceSummary::Row row;
        std::map<int, int> queue_len;  // opening -> occupancy + holders
    };
    double cur_t = -1.0;
    bool have_group = false;
    TickGroup group;
    bool have_header = false;

    auto flush = [&]() {
        if (!have_group) return;
        if (group.positions.size() >= 2) {
            SeparationReport rep =
                check_separation(group.positions, s.header.delta_min);
            s.metrics.min_separation =
                std::min(s.metrics.min_separation, rep.min_distance);
            s.metrics.separation_violations +=
                static_cast<std::int64_t>(rep.violations.size());
            group.row.min_sep = rep.min_distance;
            group.row.has_min_sep = true;
        }
        for (const auto& [oid, len] : group.queue_len) {
            OpeningMetrics& om = opening_slot(oid);
            om.max_queue_len = std::max(om.max_queue_len, len);
            s.metrics.max_queue_len = std::max(s.metrics.max_queue_len, len);
        }
        group.row.t = cur_t;
        s.rows.push_back(group.row);
        group = TickGroup{};
        have_group = false;
    };

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.contains("record") && j["record"] == "end") {
            s.metrics.elapsed = std::max(s.metrics.elapsed, j["t"].get<double>());
            continue;
        }
        if (j.contains("record") && j["record"] == "header") {
            s.header.version = j.value("version", 1);
            s.header.scenario = j.value("scenario", "");
            s.header.seed = j.value("seed", 0ull);
            s.header.dt = j.value("dt", 0.0);
            s.header.delta_min = j.value("delta_min", 0.0);
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError(trace_path + ": missing trace header");

        if (j.contains("event")) {
            std::string kind = j["event"];
            double t = j["t"];
            if (kind == "spawn") {
                ++s.metrics.spawned;
            } else if (kind == "assignment") {
                ++opening_slot(j["opening"].get<int>()).assigned;
            } else if (kind == "admission") {
                double transit = j["transit_s"];
                ++s.metrics.admitted;
                s.metrics.transit_sum += transit;
                s.metrics.transit_max = std::max(s.metrics.transit_max, transit);
                OpeningMetrics& om = opening_slot(j["opening"].get<int>());
                ++om.admitted;
                om.transit_sum += transit;
                om.transit_max = std::max(om.transit_max, transit);
            } else if (kind == "failure") {
                ++s.metrics.failed;
                if (j.contains("opening") && j["opening"].get<int>() >= 0)
                    ++opening_slot(j["opening"].get<int>()).failed;
            }
            s.metrics.elapsed = std::max(s.metrics.elapsed, t);
            continue;
        }

        // per-tick drone record
        double t = j["t"];
        if (!have_group || t != cur_t) {
            flush();
            cur_t = t;
            have_group = true;
        }
        group.positions.push_back(
            {j["x"].get<double>(), j["y"].get<double>(), j["z"].get<double>()});
        std::string state = j["state"];
        if (state == "spawned") ++group.row.holding;
        else if (state == "approaching") ++group.row.approaching;
        else if (state == "queued") ++group.row.queued;
        else if (state == "swapping") ++group.row.swapping;
        int opening = j["opening"].get<int>();
        int slot = j["slot"].get<int>();
        if (opening >= 0 && (slot >= 0 || state == "spawned"))
            ++group.queue_len[opening];
        s.metrics.elapsed = std::max(s.metrics.elapsed, t);
        continue;
    }
    flush();

    // cumulative event counts per row need a second pass over event times;
    // recompute from the metrics-bearing events
    std::ifstream in2(trace_path);
    std::vector<std::pair<double, int>> marks;  // (t, +1 admitted / -1 failed)
    while (std::getline(in2, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (!j.contains("event")) continue;
        if (j["event"] == "admission") marks.emplace_back(j["t"].get<double>(), 1);
        else if (j["event"] == "failure") marks.emplace_back(j["t"].get<double>(), -1);
    }
    std::stable_sort(marks.begin(), marks.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t mi = 0;
    std::int64_t adm = 0, fail = 0;
    for (auto& row : s.rows) {
        while (mi < marks.size() && marks[mi].first <= row.t + 1e-12) {
            if (marks[mi].second > 0) ++adm;
            else ++fail;
            ++mi;
        }
        row.admitted_cum = adm;
        row.failed_cum = fail;
    }
    return s;
}

void write_timeseries_csv(const std::string& path, const TraceSummary& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "# flightq-report v1\n";
    out << "t,holding,approaching,queued,swapping,admitted_cum,failed_cum,"
           "min_separation_m\n";
    for (const auto& r : s.rows) {
        out << fmt(r.t) << "," << r.holding << "," << r.approaching << "," << r.queued
            << "," << r.swapping << "," << r.admitted_cum << "," << r.failed_cum << ","
            << (r.has_min_sep ? fmt(r.min_sep) : "") << "\n";
    }
}

std::string render_summary_table(const Metrics& m) {
    std::ostringstream out;
    out << "spawned              " << m.spawned << "\n";
    out << "admitted             " << m.admitted << "\n";
    out << "failed               " << m.failed << "\n";
    out << "throughput [1/s]     " << fmt(m.throughput()) << "\n";
    out << "transit mean [s]     " << fmt(m.transit_mean()) << "\n";
    out << "transit max [s]      " << fmt(m.transit_max) << "\n";
    out << "min separation [m]   " << fmt(m.min_separation) << "\n";
    out << "violations           " << m.separation_violations << "\n";
    out << "max queue length     " << m.max_queue_len << "\n";
    out << "elapsed [s]          " << fmt(m.elapsed) << "\n";
    for (const auto& o : m.per_opening) {
        out << "opening " << o.opening_id << "          admitted " << o.admitted
            << ", failed " << o.failed << ", max queue " << o.max_queue_len << "\n";
    }
    return out.str();
}

bool comparable_scenarios(const Scenario& a, const Scenario& b) {
    Scenario na = a;
    Scenario nb = b;
    na.name = nb.name = "";
    na.dispatch = nb.dispatch = DispatchConfig{};
    for (auto& o : na.openings) o.policy = Policy{};
    for (auto& o : nb.openings) o.policy = Policy{};
    return na == nb;
}

std::vector<CompareRow> compare_scenarios(const Scenario& a, const Scenario& b,
                                          int n_seeds) {
    std::vector<CompareRow> rows;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Scenario sa = a;
        Scenario sb = b;
        sa.sim.seed = static_cast<std::uint64_t>(seed);
        sb.sim.seed = static_cast<std::uint64_t>(seed);
        RunResult ra = run(sa);
        RunResult rb = run(sb);
        CompareRow row;
        row.seed = static_cast<std::uint64_t>(seed);
        row.failures_a = ra.metrics.failed;
        row.failures_b = rb.metrics.failed;
        row.transit_mean_a = ra.metrics.transit_mean();
        row.transit_mean_b = rb.metrics.transit_mean();
        rows.push_back(row);
    }
    return rows;
}

void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "# flightq-compare v1\n";
    out << "seed,failures_a,failures_b,transit_mean_a,transit_mean_b\n";
    for (const auto& r : rows)
        out << r.seed << "," << r.failures_a << "," << r.failures_b << ","
            << fmt(r.transit_mean_a) << "," << fmt(r.transit_mean_b) << "\n";
}

}  // namespace flightq
