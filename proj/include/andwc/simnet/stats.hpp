#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "andwc/simnet/time.hpp"

namespace andwc::simnet {

// Raw observations recorded during a run. The report layer aggregates these;
// agents and the engine only append.
struct RunStats {
    std::map<std::string, std::int64_t> air_frames;   // by frame name, per transmission
    std::map<std::string, std::int64_t> lan_packets;  // by packet name, per send

    struct PhaseChange {
        std::string agent;
        std::string phase;
        SimTime at;
    };
    std::vector<PhaseChange> phases;

    // One row per air-verification pass, in token-grant order.
    struct Verification {
        std::string ap;
        SimTime begin;
        std::optional<SimTime> end;
        int verified = 0;  // neighbors confirmed over the air in this pass
        int silent = 0;    // neighbors that never answered
    };
    std::vector<Verification> verifications;

    struct Handoff {
        std::string ms;
        SimTime trigger;
        std::optional<SimTime> complete;  // empty: still in progress at run end
        int candidates_tried = 0;         // cached-list attempts, successful one included
        int probes_sent = 0;              // probe requests emitted within this handoff
        bool via_full_scan = false;
        std::string target;               // mac of the AP finally joined
    };
    std::vector<Handoff> handoffs;

    struct Scan {
        std::string ms;
        SimTime start;
        std::optional<SimTime> end;
        SimTime total_dwell;
        int channels = 0;
        int responders = 0;
    };
    std::vector<Scan> scans;

    struct Traffic {
        std::string source;
        std::int64_t sent = 0;
        std::int64_t delivered = 0;
        std::int64_t lost = 0;
    };
    std::vector<Traffic> traffic;

    std::int64_t air_frame_count(const std::string& name) const {
        auto it = air_frames.find(name);
        return it == air_frames.end() ? 0 : it->second;
    }
};

}  // namespace andwc::simnet
