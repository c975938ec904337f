#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "andwc/simnet/geometry.hpp"
#include "andwc/simnet/radio.hpp"
#include "andwc/simnet/simulator.hpp"
#include "andwc/simnet/time.hpp"
#include "andwc/wire/types.hpp"

namespace andwc::harness {

using simnet::SimTime;

// A scenario file describes one deployment: APs with positions and power
// schedules, stations with motion, payload traffic, and optional expected
// outcomes that turn a run into a checked experiment.

struct ApSpec {
    std::string id;
    wire::MacAddress mac;
    wire::Ipv4 ip;
    std::uint8_t channel = 1;
    simnet::Vec2 position;
    SimTime power_on;
    SimTime power_on_jitter;                       // uniform extra in [0, jitter]
    std::optional<std::string> power_on_after_id;  // offset from that AP's power-on
    std::optional<SimTime> power_off;
    std::string segment = "lan0";
};

enum class StationMode { NeighborCache, BaselineFullScan };

struct StationSpec {
    std::string id;
    StationMode mode = StationMode::NeighborCache;
    wire::MacAddress mac;
    simnet::Vec2 start_position;
    simnet::Vec2 velocity_mps;
    wire::Rss handoff_threshold = wire::Rss::from_dbm(-80.0);
    std::optional<std::string> initial_ap_id;
    SimTime motion_start;
};

struct TrafficSpec {
    std::string name;
    std::string destination;  // station id
    SimTime start;
    SimTime interval;
    std::int64_t total_packets = 0;
};

struct Bounds {
    std::optional<double> min;
    std::optional<double> max;
};

struct HandoffExpect {
    std::string station;
    std::optional<int> count;          // completed handoffs over the run
    std::optional<Bounds> latency_ms;  // of the first completed handoff
    std::optional<bool> via_full_scan;
    std::optional<std::string> target;  // ap id
};

struct LossExpect {
    std::optional<std::string> source;  // absent: sum over all streams
    Bounds packets_lost;
};

struct Expect {
    std::vector<HandoffExpect> handoffs;
    std::vector<LossExpect> packet_loss;
    bool all_aps_operational = false;
    bool verification_mutual_exclusion = false;
    std::optional<std::int64_t> air_verification_frames;
};

struct TimingSpec {
    SimTime beacon_interval = SimTime::from_ms(100);
    SimTime min_channel_time = SimTime::from_ms(20);
    SimTime max_channel_time = SimTime::from_ms(40);
    SimTime channel_switch_time = SimTime::from_ms(0);
    SimTime collection_window = SimTime::from_ms(50);
    SimTime air_verify_timeout = SimTime::from_ms(2);
    SimTime auth_service_delay = SimTime::from_ms(1);
    SimTime assoc_service_delay = SimTime::from_ms(1);
    // Probe round trip as seen by the scanner, both air hops included.
    SimTime probe_response_latency = SimTime::from_ms(1);
    SimTime auth_req_timeout = SimTime::from_ms(0.5);
    SimTime auth_response_deadline = SimTime::from_ms(20);
    SimTime rescan_backoff = SimTime::from_ms(100);
    double hysteresis_db = 5.0;
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 1;
    SimTime duration;
    std::string band = "bg11";           // bg11: channels 1..11, a32: 1..32
    std::vector<std::uint8_t> channels;  // derived from band
    simnet::RadioModel radio;
    simnet::LinkConfig links;
    TimingSpec timing;
    std::vector<ApSpec> aps;
    std::vector<StationSpec> stations;
    std::vector<TrafficSpec> traffic;
    Expect expect;

    const ApSpec* find_ap(const std::string& id) const;
    const StationSpec* find_station(const std::string& id) const;

    // The full descriptive row other agents hold for this AP.
    wire::ApInfoEntry ap_entry(const ApSpec& ap) const;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Both throw ScenarioError with a field path in the message.
Scenario parse_scenario(const std::string& json_text, const std::string& origin);
Scenario load_scenario_file(const std::string& path);

}  // namespace andwc::harness
