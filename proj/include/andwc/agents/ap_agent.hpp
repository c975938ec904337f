#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "andwc/agents/config.hpp"
#include "andwc/simnet/simulator.hpp"

namespace andwc::agents {

// Pure voting arithmetic, kept free so the rules are testable without a
// simulation around them.

// Sorted, deduplicated census including self.
std::vector<wire::MacAddress> build_mac_list(std::vector<wire::MacAddress> macs);

// Least element strictly greater than self; empty for the maximal member.
std::optional<wire::MacAddress> successor_of(const std::vector<wire::MacAddress>& mac_list,
                                             const wire::MacAddress& self);

// Strongest-first order for beacon neighbor lists; equals break toward the
// lower mac so every AP publishes the same order for the same measurements.
bool neighbor_order(const wire::ApInfoEntry& a, const wire::ApInfoEntry& b);

// Access point running the cached-neighbor fast-handoff scheme: one census
// round at power-on, a vote ordering all APs by WNIC mac, a token-passed
// over-the-air verification pass each, then beacons carrying the verified
// neighbor list.
class ApAgent final : public simnet::Agent {
public:
    enum class Phase { Off, Collecting, Voted, AirVerifying, Operational };

    struct Config {
        wire::ApInfoEntry self;  // descriptive fields; real_neighbor/rss unused
        simnet::Vec2 position;
        std::string segment = "lan0";
        ProtocolTiming timing;
    };

    ApAgent(std::string name, Config config);

    // Agent interface
    void on_power_on(simnet::Simulator& sim) override;
    void on_wireless(simnet::Simulator& sim, const wire::MgmtFrame& frame,
                     wire::Rss rss) override;
    void on_lan(simnet::Simulator& sim, const wire::IappPacket& packet) override;
    void on_timer(simnet::Simulator& sim, std::uint64_t cookie) override;

    simnet::Vec2 position(SimTime) const override { return config_.position; }
    std::optional<std::uint8_t> tuned_channel() const override;
    std::optional<wire::MacAddress> radio_mac() const override { return config_.self.mac; }
    std::optional<wire::Ipv4> lan_ip() const override { return config_.self.ip; }
    std::optional<std::string> lan_segment() const override { return config_.segment; }

    // Introspection for tests and reports
    Phase phase() const { return phase_; }
    bool finished() const { return finished_; }
    bool i_am_the_last() const { return i_am_the_last_; }
    std::optional<wire::MacAddress> next_mac() const { return next_mac_; }
    const std::vector<wire::MacAddress>& mac_list() const { return mac_list_; }
    const std::map<wire::MacAddress, wire::ApInfoEntry>& apinfo() const { return apinfo_; }
    const std::vector<wire::ApInfoEntry>& real_neighbours() const { return real_neighbours_; }
    const wire::ApInfoEntry& self_entry() const { return config_.self; }

    static const char* phase_name(Phase phase);

private:
    void handle_apinfo_req(simnet::Simulator& sim, const wire::ApInfoReq& req,
                           const wire::Ipv4& caller_ip);
    void handle_apinfo_res(simnet::Simulator& sim, const wire::ApInfoRes& res);
    void handle_permission(simnet::Simulator& sim, const wire::Permission& permission);
    void accept_permission(simnet::Simulator& sim, const wire::Permission& permission);
    void finalize_voting(simnet::Simulator& sim);
    void begin_air_verification(simnet::Simulator& sim);
    void verify_next(simnet::Simulator& sim);
    void complete_air_verification(simnet::Simulator& sim);
    void emit_beacon(simnet::Simulator& sim);
    void set_phase(simnet::Simulator& sim, Phase phase);

    // List maintenance
    wire::ApInfoEntry& upsert_entry(const wire::ApInfoEntry& seen);
    void mark_real(simnet::Simulator& sim, const wire::ApInfoEntry& seen, wire::Rss rss);

    void send_iapp(simnet::Simulator& sim, const wire::Ipv4& dst, wire::IappBody body);
    void send_frame(simnet::Simulator& sim, const wire::MacAddress& dst,
                    std::uint8_t channel, wire::FrameBody body);

    Config config_;
    Phase phase_ = Phase::Off;

    std::map<wire::MacAddress, wire::ApInfoEntry> apinfo_;  // keyed by WNIC mac
    std::vector<wire::MacAddress> mac_list_;
    std::vector<wire::ApInfoEntry> real_neighbours_;  // strongest first

    bool i_am_the_last_ = false;
    bool finished_ = false;
    // The join handshake fixes this AP's place in the sequence before the
    // vote closes; when set, finalize_voting must not recompute the tail state.
    bool sequence_pinned_ = false;
    std::optional<wire::MacAddress> next_mac_;
    std::optional<wire::Permission> pending_permission_;

    // Air-verification cursor
    std::vector<wire::MacAddress> targets_;
    std::size_t target_index_ = 0;
    int retries_left_ = 0;
    std::uint64_t verify_generation_ = 0;
    std::optional<std::uint8_t> channel_override_;
    int verification_row_ = -1;

    // Station service queues (FIFO per kind)
    std::deque<wire::MacAddress> probe_queue_;
    std::deque<wire::MacAddress> auth_queue_;
    std::deque<wire::MacAddress> assoc_queue_;
    std::set<wire::MacAddress> authenticated_;
};

}  // namespace andwc::agents
