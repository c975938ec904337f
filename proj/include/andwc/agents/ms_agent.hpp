#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "andwc/agents/config.hpp"
#include "andwc/scanning/scan.hpp"
#include "andwc/simnet/geometry.hpp"
#include "andwc/simnet/simulator.hpp"

namespace andwc::agents {

// Mobile station. Two personalities behind one switch:
//
//   use_neighbor_cache = true   handoff tries the serving AP's advertised
//                               neighbor list first, strongest link first,
//                               and falls back to a full active scan only
//                               when the list is exhausted or empty;
//   use_neighbor_cache = false  classic behavior, every handoff is a full
//                               active scan followed by auth/assoc.
class MsAgent final : public simnet::Agent {
public:
    enum class Mode { Idle, Associated, HandingOff, FullScan };

    struct Config {
        wire::MacAddress mac;
        simnet::LinearMobility mobility;
        wire::Rss handoff_threshold = wire::Rss::from_dbm(-80.0);
        scanning::ScanConfig scan;
        ProtocolTiming timing;
        bool use_neighbor_cache = true;
        std::optional<wire::ApInfoEntry> initial_ap;  // none: boot with a scan
    };

    MsAgent(std::string name, Config config);

    void on_power_on(simnet::Simulator& sim) override;
    void on_wireless(simnet::Simulator& sim, const wire::MgmtFrame& frame,
                     wire::Rss rss) override;
    void on_timer(simnet::Simulator& sim, std::uint64_t cookie) override;
    void on_tx_confirm(simnet::Simulator& sim, std::uint64_t cookie) override;

    simnet::Vec2 position(SimTime at) const override { return config_.mobility.at(at); }
    std::optional<std::uint8_t> tuned_channel() const override { return channel_; }
    std::optional<wire::MacAddress> radio_mac() const override { return config_.mac; }
    bool traffic_ready() const override { return mode_ == Mode::Associated; }

    Mode mode() const { return mode_; }
    const std::optional<wire::ApInfoEntry>& serving_ap() const { return serving_; }
    const std::vector<wire::ApInfoEntry>& handoff_list() const { return handoff_list_; }
    int handoffs_completed() const { return handoffs_completed_; }

    static const char* mode_name(Mode mode);

private:
    enum class Stage { None, Auth, Assoc };

    void handle_beacon(simnet::Simulator& sim, const wire::Beacon& beacon,
                       wire::Rss rss);
    void start_handoff(simnet::Simulator& sim, wire::Rss trigger_rss);
    void attempt_candidate(simnet::Simulator& sim);
    void begin_auth(simnet::Simulator& sim, const wire::ApInfoEntry& target,
                    std::optional<wire::Rss> saved_rss, bool via_full_scan);
    void candidate_failed(simnet::Simulator& sim, const std::string& why);
    void handle_auth_res(simnet::Simulator& sim, const wire::MgmtFrame& frame,
                         const wire::AuthRes& res, wire::Rss rss);
    void handle_assoc_res(simnet::Simulator& sim, const wire::MgmtFrame& frame,
                          const wire::AssocRes& res);
    void complete_association(simnet::Simulator& sim);

    void begin_full_scan(simnet::Simulator& sim);
    void enter_channel(simnet::Simulator& sim);
    void leave_channel(simnet::Simulator& sim, SimTime dwell);
    void finish_scan(simnet::Simulator& sim);

    void set_mode(simnet::Simulator& sim, Mode mode);

    Config config_;
    Mode mode_ = Mode::Idle;
    std::optional<std::uint8_t> channel_;

    std::optional<wire::ApInfoEntry> serving_;
    std::optional<wire::ApInfoEntry> previous_ap_;
    std::vector<wire::ApInfoEntry> handoff_list_;  // strongest first, from beacons
    std::optional<wire::Rss> trigger_rss_;

    // Current auth/assoc attempt
    std::optional<wire::ApInfoEntry> current_target_;
    std::optional<wire::Rss> saved_rss_;
    bool via_full_scan_ = false;
    Stage stage_ = Stage::None;
    std::size_t candidate_ = 0;  // cursor into handoff_list_
    std::uint64_t attempt_generation_ = 0;
    bool tx_confirmed_ = false;
    int retries_left_ = 0;

    // Active-scan cursor
    std::uint64_t scan_generation_ = 0;
    std::size_t scan_channel_index_ = 0;
    int hits_this_channel_ = 0;
    SimTime channel_entered_ = SimTime::from_us(0);
    SimTime scan_dwell_total_ = SimTime::from_us(0);
    std::vector<scanning::ScanHit> hits_;

    int handoff_row_ = -1;
    int scan_row_ = -1;
    int handoffs_completed_ = 0;
};

}  // namespace andwc::agents
