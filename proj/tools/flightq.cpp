#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "flightq/report.hpp"
#include "flightq/workload.hpp"

namespace fs = std::filesystem;
using namespace flightq;

namespace {

int log_level() {
    const char* env = std::getenv("FLIGHTQ_LOG");
    if (!env) return 1;
    std::string v = env;
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "flightq: " << msg << "\n";
}

Scenario load_with_overrides(const std::string& path, double horizon, double dt,
                             std::int64_t seed) {
    Scenario s = load_scenario(path);
    bool changed = false;
    if (horizon > 0.0) { s.sim.horizon = horizon; changed = true; }
    if (dt > 0.0) { s.sim.dt = dt; changed = true; }
    if (seed >= 0) { s.sim.seed = static_cast<std::uint64_t>(seed); changed = true; }
    if (changed) {
        auto issues = validate_scenario(s);
        if (!issues.empty()) throw ConfigInvalid(issues);
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flightq: collision-free flight-pattern queue simulator"};
    app.require_subcommand(1);

    // run
    auto* cmd_run = app.add_subcommand("run", "simulate a scenario, write trace + metrics");
    std::string run_scenario_path, run_out = "runs";
    double run_horizon = -1.0, run_dt = -1.0;
    std::int64_t run_seed = -1;
    bool quiet = false, export_arrivals = false;
    cmd_run->add_option("--scenario", run_scenario_path, "scenario file")->required();
    cmd_run->add_option("--seed", run_seed, "override sim.seed");
    cmd_run->add_option("--out", run_out, "output directory");
    cmd_run->add_option("--horizon", run_horizon, "override sim.horizon [s]");
    cmd_run->add_option("--dt", run_dt, "override sim.dt [s]");
    cmd_run->add_flag("--quiet", quiet, "suppress the summary table");
    cmd_run->add_flag("--export-arrivals", export_arrivals,
                      "also write the generated arrival list as CSV");

    // validate
    auto* cmd_validate = app.add_subcommand("validate", "check a scenario file");
    std::string val_scenario_path;
    cmd_validate->add_option("--scenario", val_scenario_path, "scenario file")->required();

    // report
    auto* cmd_report = app.add_subcommand("report", "summarize a trace file");
    std::string rep_trace, rep_out;
    cmd_report->add_option("--trace", rep_trace, "trace.jsonl to read")->required();
    cmd_report->add_option("--out", rep_out, "directory for the per-tick CSV");

    // compare
    auto* cmd_compare =
        app.add_subcommand("compare", "run two scenarios across seeds side by side");
    std::string cmp_a, cmp_b, cmp_out;
    int cmp_seeds = 10;
    cmd_compare->add_option("--a", cmp_a, "first scenario")->required();
    cmd_compare->add_option("--b", cmp_b, "second scenario")->required();
    cmd_compare->add_option("--seeds", cmp_seeds, "number of seeds (0..n-1)");
    cmd_compare->add_option("--out", cmp_out, "directory for compare.csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_run) {
            Scenario s = load_with_overrides(run_scenario_path, run_horizon, run_dt, run_seed);
            fs::create_directories(run_out);
            info("running scenario '" + s.name + "'");
            FileSink sink((fs::path(run_out) / "trace.jsonl").string());
            RunResult result = run(s, &sink);
            write_metrics_csv((fs::path(run_out) / "metrics.csv").string(), result.metrics);
            if (export_arrivals)
                write_arrivals_csv((fs::path(run_out) / "arrivals.csv").string(),
                                   generate(s.workload, s.sim.seed));
            if (!quiet && log_level() >= 1)
                std::cout << render_summary_table(result.metrics);
            bool clean = result.metrics.separation_violations == 0 &&
                         result.metrics.invariant_breaches == 0;
            return clean ? 0 : 2;
        }
        if (*cmd_validate) {
            try {
                (void)load_scenario(val_scenario_path);
            } catch (const ConfigInvalid& e) {
                for (const auto& issue : e.issues) std::cout << issue << "\n";
                return 1;
            } catch (const ParseError& e) {
                std::cout << e.what() << "\n";
                return 1;
            }
            std::cout << "ok\n";
            return 0;
        }
        if (*cmd_report) {
            TraceSummary s = summarize_trace(rep_trace);
            std::cout << render_summary_table(s.metrics);
            if (!rep_out.empty()) {
                fs::create_directories(rep_out);
                write_timeseries_csv((fs::path(rep_out) / "timeseries.csv").string(), s);
            }
            return 0;
        }
        if (*cmd_compare) {
            Scenario a = load_scenario(cmp_a);
            Scenario b = load_scenario(cmp_b);
            if (!comparable_scenarios(a, b)) {
                std::cerr << "compare: scenarios must differ only in policy or "
                             "dispatch mode\n";
                return 1;
            }
            auto rows = compare_scenarios(a, b, cmp_seeds);
            std::string out_path = "compare.csv";
            if (!cmp_out.empty()) {
                fs::create_directories(cmp_out);
                out_path = (fs::path(cmp_out) / "compare.csv").string();
            }
            write_compare_csv(out_path, rows);
            std::cout << "seed,failures_a,failures_b,transit_mean_a,transit_mean_b\n";
            for (const auto& r : rows)
                std::cout << r.seed << "," << r.failures_a << "," << r.failures_b << ","
                          << r.transit_mean_a << "," << r.transit_mean_b << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "flightq: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "flightq: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
