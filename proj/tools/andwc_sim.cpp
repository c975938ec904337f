#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "andwc/harness/report.hpp"
#include "andwc/harness/runner.hpp"
#include "andwc/harness/scenario.hpp"

namespace {

using namespace andwc;

std::optional<std::uint64_t> seed_option(bool set, std::uint64_t value) {
    if (set) return value;
    return std::nullopt;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        return false;
    }
    out << content;
    return true;
}

int cmd_run(const std::string& file, bool seed_set, std::uint64_t seed,
            const std::string& csv_path, const std::string& log_path) {
    auto scenario = harness::load_scenario_file(file);
    auto outcome = harness::run_scenario(scenario, seed_option(seed_set, seed));

    std::cout << harness::text_summary(outcome);

    if (!csv_path.empty()) {
        std::ostringstream os;
        harness::write_csv(os, {outcome});
        if (!write_file(csv_path, os.str())) return 2;
    }
    if (!log_path.empty()) {
        if (!write_file(log_path, outcome.event_log)) return 2;
    }

    auto checks = harness::check_expectations(scenario, outcome);
    bool failed = false;
    for (const auto& check : checks) {
        std::cout << (check.ok ? "[ok]   " : "[FAIL] ") << check.text << "\n";
        failed = failed || !check.ok;
    }
    return failed ? 1 : 0;
}

int cmd_compare(const std::string& file, bool seed_set, std::uint64_t seed,
                const std::string& csv_path, const std::string& log_path) {
    auto scenario = harness::load_scenario_file(file);
    auto seed_arg = seed_option(seed_set, seed);
    auto cached =
        harness::run_scenario(scenario, seed_arg, harness::ForceMode::NeighborCache);
    auto baseline = harness::run_scenario(scenario, seed_arg,
                                          harness::ForceMode::BaselineFullScan);

    auto cmp = harness::compare_outcomes(cached, baseline);
    std::cout << "scenario " << scenario.name << ", seed " << cached.seed << "\n"
              << harness::comparison_text(cmp);

    if (!csv_path.empty()) {
        std::ostringstream os;
        harness::write_csv(os, {cached, baseline});
        harness::write_comparison_rows(os, cmp, scenario.name, cached.seed);
        if (!write_file(csv_path, os.str())) return 2;
    }
    if (!log_path.empty()) {
        std::string log = "== mode andwc ==\n" + cached.event_log +
                          "== mode baseline ==\n" + baseline.event_log;
        if (!write_file(log_path, log)) return 2;
    }

    for (const auto& check : cmp.checks)
        if (!check.ok) return 1;
    return 0;
}

int cmd_validate(const std::vector<std::string>& files) {
    int bad = 0;
    for (const auto& file : files) {
        try {
            auto scenario = harness::load_scenario_file(file);
            std::cout << file << ": ok (" << scenario.aps.size() << " aps, "
                      << scenario.stations.size() << " stations, "
                      << scenario.traffic.size() << " streams)\n";
        } catch (const harness::ScenarioError& e) {
            std::cout << file << ": " << e.what() << "\n";
            ++bad;
        }
    }
    return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast-handoff WLAN simulator"};
    app.require_subcommand(1);

    std::string file, csv_path, log_path;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "Run one scenario and check its expectations");
    run->add_option("scenario", file, "scenario json file")->required();
    auto* run_seed = run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--csv", csv_path, "write metrics records to this file");
    run->add_option("--log", log_path, "write the event log to this file");

    auto* compare = app.add_subcommand(
        "compare", "Run the scenario in cached and baseline modes and compare");
    compare->add_option("scenario", file, "scenario json file")->required();
    auto* cmp_seed = compare->add_option("--seed", seed, "override the scenario seed");
    compare->add_option("--csv", csv_path, "write metrics records to this file");
    compare->add_option("--log", log_path, "write both event logs to this file");

    std::vector<std::string> files;
    auto* validate = app.add_subcommand("validate", "Parse scenario files and report problems");
    validate->add_option("scenarios", files, "scenario json files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(file, !run_seed->empty(), seed, csv_path, log_path);
        if (compare->parsed())
            return cmd_compare(file, !cmp_seed->empty(), seed, csv_path, log_path);
        return cmd_validate(files);
    } catch (const andwc::harness::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
