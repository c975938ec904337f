#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "andwc/simnet/time.hpp"
#include "andwc/wire/types.hpp"

namespace andwc::scanning {

using simnet::SimTime;

// Pure channel-sweep arithmetic shared by the station agent and the tests.
// The station drives the same rules through event timers; these functions
// compute the outcome over a snapshot of who would answer on each channel.

struct ScanConfig {
    std::vector<std::uint8_t> channels;  // visited in this order
    SimTime min_channel_time;            // active: give-up point on a quiet channel
    SimTime max_channel_time;            // active: full dwell once someone answers
    SimTime beacon_interval;             // passive: listen window per channel
    SimTime channel_switch_time;         // charged once per visited channel

    void validate() const;  // throws std::invalid_argument
};

// Passive sweep: one full beacon interval per channel, plus switch costs.
SimTime passive_scan_delay(const ScanConfig& cfg);

// Active dwell rule: a channel that stays silent until MinChannelTime is
// abandoned there; any answer arriving strictly before MinChannelTime commits
// the scanner to MaxChannelTime. Strictly-before matches the event engine,
// where a dwell timer armed at channel entry outranks a same-instant arrival.
SimTime active_channel_dwell(const ScanConfig& cfg, int responses_before_min);

struct ScanResponder {
    wire::ApInfoEntry ap;
    wire::Rss rss;       // as the scanner would hear the response
    SimTime latency;     // probe emission -> response arrival
};

struct ScanEnvironment {
    std::map<std::uint8_t, std::vector<ScanResponder>> by_channel;
};

struct ScanHit {
    wire::ApInfoEntry ap;
    wire::Rss rss;
    std::uint8_t channel = 1;
};

struct ScanResult {
    std::vector<ScanHit> hits;        // discovery order
    std::vector<SimTime> dwell;       // per visited channel
    SimTime total_delay;              // sum of dwells + switch costs
    int probes_sent = 0;
};

ScanResult run_active_scan(const ScanConfig& cfg, const ScanEnvironment& env);

// Strongest responder clearing the hysteresis bar against the current link;
// pass nullopt when there is no current link to beat. Ties go to the lowest
// mac so repeated scans of an unchanged world pick the same AP.
std::optional<ScanHit> select_best(const std::vector<ScanHit>& hits,
                                   std::optional<wire::Rss> current_rss,
                                   double hysteresis_db);

}  // namespace andwc::scanning
