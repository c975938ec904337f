#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "andwc/simnet/geometry.hpp"
#include "andwc/simnet/radio.hpp"
#include "andwc/simnet/stats.hpp"
#include "andwc/simnet/time.hpp"
#include "andwc/wire/frames.hpp"
#include "andwc/wire/iapp.hpp"

namespace andwc::simnet {

class Simulator;

using AgentId = int;

class Agent {
public:
    explicit Agent(std::string name) : name_(std::move(name)) {}
    virtual ~Agent() = default;

    const std::string& name() const { return name_; }
    AgentId id() const { return id_; }
    bool powered() const { return powered_; }

    virtual void on_power_on(Simulator&) {}
    virtual void on_power_off(Simulator&) {}
    virtual void on_wireless(Simulator&, const wire::MgmtFrame&, wire::Rss) {}
    virtual void on_lan(Simulator&, const wire::IappPacket&) {}
    virtual void on_timer(Simulator&, std::uint64_t) {}
    virtual void on_tx_confirm(Simulator&, std::uint64_t) {}

    virtual Vec2 position(SimTime at) const = 0;
    // Channel the receiver currently listens on; nullopt means radio idle.
    virtual std::optional<std::uint8_t> tuned_channel() const = 0;
    virtual std::optional<wire::MacAddress> radio_mac() const = 0;
    // Wired presence; only set for APs.
    virtual std::optional<wire::Ipv4> lan_ip() const { return std::nullopt; }
    virtual std::optional<std::string> lan_segment() const { return std::nullopt; }
    // Whether a payload packet addressed to this agent lands (stations only).
    virtual bool traffic_ready() const { return false; }

private:
    friend class Simulator;
    std::string name_;
    AgentId id_ = -1;
    bool powered_ = false;
};

struct LinkConfig {
    SimTime air_latency = SimTime::from_us(100);   // transmission -> reception
    SimTime lan_latency = SimTime::from_us(200);   // wired hop, lossless, FIFO
};

struct TrafficSource {
    std::string name;
    AgentId destination = -1;
    SimTime start;
    SimTime interval;
    std::int64_t total_packets = 0;
};

// Deterministic discrete-event core. Events fire in (time, sequence) order;
// the sequence number is assigned at scheduling, so identical inputs replay
// identically, byte for byte.
class Simulator {
public:
    Simulator(RadioModel radio, LinkConfig links);

    AgentId add_agent(Agent& agent, SimTime power_on,
                      std::optional<SimTime> power_off = std::nullopt);
    void add_traffic(TrafficSource source);

    void run_until(SimTime end);

    SimTime now() const { return now_; }
    const RadioModel& radio() const { return radio_; }
    const LinkConfig& links() const { return links_; }

    void schedule_timer(Agent& who, SimTime delay, std::uint64_t cookie);

    // Transmits on frame.channel from the sender's current position. With
    // want_tx_confirm, a link-level acknowledgment comes back one round trip
    // later if some powered receiver tuned there matches dst exactly.
    void send_air(Agent& from, const wire::MgmtFrame& frame,
                  bool want_tx_confirm = false, std::uint64_t confirm_cookie = 0);

    // Multicast fans out to the sender's segment; unicast is routed to the
    // owner of the address on any segment.
    void send_lan(Agent& from, const wire::IappPacket& packet);

    void note(const Agent& who, const std::string& text);

    RunStats& stats() { return stats_; }
    const RunStats& stats() const { return stats_; }
    const std::string& event_log() const { return log_; }

private:
    struct WirelessDelivery {
        wire::MgmtFrame frame;
        wire::Rss rss;
    };
    struct LanDelivery {
        wire::IappPacket packet;
    };
    struct TimerFired {
        std::uint64_t cookie;
    };
    struct TxConfirm {
        std::uint64_t cookie;
    };
    struct TrafficDelivery {
        int source;
        std::int64_t index;
    };
    struct PowerOn {};
    struct PowerOff {};
    using EventPayload = std::variant<WirelessDelivery, LanDelivery, TimerFired,
                                      TxConfirm, TrafficDelivery, PowerOn, PowerOff>;

    struct Event {
        SimTime time;
        std::uint64_t seq;
        AgentId target;
        EventPayload payload;
    };
    struct EventAfter {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    void schedule(SimTime at, AgentId target, EventPayload payload);
    void dispatch(const Event& event);
    void log_line(const std::string& text);

    RadioModel radio_;
    LinkConfig links_;
    SimTime now_;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::vector<Agent*> agents_;
    std::vector<TrafficSource> traffic_;
    RunStats stats_;
    std::string log_;
};

}  // namespace andwc::simnet
