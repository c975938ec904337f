#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "andwc/harness/scenario.hpp"
#include "andwc/simnet/stats.hpp"

namespace andwc::harness {

// Stations keep the mode their spec gives them unless a run forces one side,
// which is how the same scenario yields a cached-vs-baseline comparison.
enum class ForceMode { None, NeighborCache, BaselineFullScan };

struct RunOutcome {
    std::string scenario_name;
    std::string band;
    std::string mode_label;  // "andwc", "baseline", or "mixed"
    std::uint64_t seed = 0;
    SimTime duration;
    int scan_channels = 0;

    simnet::RunStats stats;
    std::string event_log;

    struct ApFinal {
        std::string id;
        std::string mac;
        std::string phase;
        bool finished = false;
        std::vector<std::string> neighbors;  // beacon order, strongest first
    };
    struct MsFinal {
        std::string id;
        std::string mode;
        std::optional<std::string> serving_mac;
        int handoffs_completed = 0;
    };
    std::vector<ApFinal> aps;
    std::vector<MsFinal> stations;
};

RunOutcome run_scenario(const Scenario& scenario,
                        std::optional<std::uint64_t> seed_override = std::nullopt,
                        ForceMode force = ForceMode::None);

struct ExpectCheck {
    bool ok = false;
    std::string text;
};

// Evaluates the scenario's expect block against a finished run; one entry
// per assertion, in file order.
std::vector<ExpectCheck> check_expectations(const Scenario& scenario,
                                            const RunOutcome& outcome);

}  // namespace andwc::harness
