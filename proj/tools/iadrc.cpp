// iadrc: run the wheel-speed/DDMR scenario under classical or improved ADRC,
// write CSV logs and compare performance indices.
//
// Exit status: 0 success, 1 configuration or usage error, 2 runtime failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iadrc/config.hpp"
#include "iadrc/csv.hpp"
#include "iadrc/metrics.hpp"
#include "iadrc/report.hpp"
#include "iadrc/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

using namespace iadrc;

struct ConfigFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ControllerVariant parse_variant(const std::string& name) {
    if (name == "adrc") return ControllerVariant::classical_adrc;
    if (name == "iadrc") return ControllerVariant::improved_adrc;
    throw ConfigFailure("unknown controller '" + name + "' (expected adrc or iadrc)");
}

RunConfig load(const std::string& path) { return path.empty() ? RunConfig{} : load_run_config(path); }

struct RunResult {
    SimLog log;
    PerformanceReport report;
};

RunResult simulate(const RunConfig& cfg, ControllerVariant variant) {
    const ControllerConfig controller = cfg.controller(variant);
    RunResult r;
    r.log = run_closed_loop(cfg.scenario, controller);
    r.report = evaluate(r.log);
    return r;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_run(const std::string& config_path, const std::string& controller, const std::string& out_path) {
    const RunConfig cfg = load(config_path);
    const ControllerVariant variant = parse_variant(controller);
    const RunResult r = simulate(cfg, variant);
    write_csv(out_path, r.log);
    std::cout << format_report(controller, r.report);
    return kExitOk;
}

int cmd_compare(const std::string& config_path, const std::string& out_path,
                const std::vector<std::string>& labels) {
    if (labels.size() != 2) throw ConfigFailure("--controllers takes exactly two names");
    const RunConfig cfg = load(config_path);
    const ControllerVariant va = parse_variant(labels[0]);
    const ControllerVariant vb = parse_variant(labels[1]);
    // Resolve both controllers before starting so config errors surface first.
    cfg.controller(va);
    cfg.controller(vb);

    auto fa = std::async(std::launch::async, simulate, std::cref(cfg), va);
    auto fb = std::async(std::launch::async, simulate, std::cref(cfg), vb);
    const RunResult a = fa.get();
    const RunResult b = fb.get();

    const std::filesystem::path report_path(out_path);
    const auto stem = (report_path.parent_path() / report_path.stem()).string();
    std::string csv_a = stem + "_" + labels[0] + ".csv";
    std::string csv_b = stem + "_" + labels[1] + ".csv";
    if (csv_a == csv_b) {
        csv_a = stem + "_" + labels[0] + "_1.csv";
        csv_b = stem + "_" + labels[1] + "_2.csv";
    }

    std::vector<std::pair<std::string, std::string>> notes;
    for (const auto& row : comparison_rows(a.report, b.report)) {
        notes.emplace_back(labels[0] + "." + row.label, fmt17(row.adrc));
        notes.emplace_back(labels[1] + "." + row.label, fmt17(row.iadrc));
        const double pct = improvement_percent(row.adrc, row.iadrc);
        notes.emplace_back("delta_percent." + row.label, std::isnan(pct) ? "n/a" : fmt17(pct));
    }
    notes.emplace_back("csv." + labels[0], csv_a);
    notes.emplace_back("csv." + labels[1], csv_b);

    const std::string text = format_comparison(labels[0], a.report, labels[1], b.report, notes);
    write_csv(csv_a, a.log);
    write_csv(csv_b, b.log);
    write_text(out_path, text);
    std::cout << text;
    return kExitOk;
}

const char* scope_name(KeyScope s) {
    switch (s) {
        case KeyScope::classical: return "adrc";
        case KeyScope::improved: return "iadrc";
        default: return "both";
    }
}

int cmd_validate(const std::string& config_path) {
    const RunConfig cfg = load(config_path);
    std::printf("%-16s %-22s %-24s %-14s %-7s %s\n", "section", "key", "value", "unit", "used_by", "provenance");
    for (const auto& e : cfg.resolved()) {
        std::printf("%-16s %-22s %-24s %-14s %-7s %s\n", e.section.c_str(), e.key.c_str(), e.value.c_str(),
                    e.unit.c_str(), scope_name(e.scope), to_string(e.provenance).c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical vs improved ADRC on a differential-drive robot"};
    app.require_subcommand(1);

    std::string config_path;
    std::string controller = "iadrc";
    std::string out_path;
    std::vector<std::string> labels{"adrc", "iadrc"};

    auto* run = app.add_subcommand("run", "Simulate one controller and write its CSV log");
    run->add_option("config", config_path, "Config file (defaults used when omitted)");
    run->add_option("--controller", controller, "adrc or iadrc")->check(CLI::IsMember({"adrc", "iadrc"}));
    run->add_option("--out", out_path, "CSV output path")->required();

    auto* compare = app.add_subcommand("compare", "Run two controllers on the same scenario and report indices");
    compare->add_option("config", config_path, "Config file (defaults used when omitted)");
    compare->add_option("--out", out_path, "Report output path; CSV logs are written next to it")->required();
    compare->add_option("--controllers", labels, "Two controllers to compare")->delimiter(',')->expected(2);

    auto* validate = app.add_subcommand("validate", "Check a config and print the resolved parameters");
    validate->add_option("config", config_path, "Config file (defaults used when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, controller, out_path);
        if (*compare) return cmd_compare(config_path, out_path, labels);
        return cmd_validate(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConfigFailure& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SimulationError& e) {
        std::cerr << "simulation error at t = " << e.time() << " s in " << e.subsystem() << ": " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
