#include "andwc/simnet/simulator.hpp"

#include <stdexcept>

namespace andwc::simnet {

Simulator::Simulator(RadioModel radio, LinkConfig links)
    : radio_(radio), links_(links) {}

AgentId Simulator::add_agent(Agent& agent, SimTime power_on,
                             std::optional<SimTime> power_off) {
    agent.id_ = static_cast<AgentId>(agents_.size());
    agents_.push_back(&agent);
    schedule(power_on, agent.id_, PowerOn{});
    if (power_off) {
        if (*power_off <= power_on)
            throw std::invalid_argument("power-off not after power-on: " + agent.name());
        schedule(*power_off, agent.id_, PowerOff{});
    }
    return agent.id_;
}

void Simulator::add_traffic(TrafficSource source) {
    if (source.destination < 0 ||
        source.destination >= static_cast<AgentId>(agents_.size()))
        throw std::invalid_argument("traffic destination is not a registered agent");
    if (source.interval.us <= 0)
        throw std::invalid_argument("traffic interval must be positive");
    int index = static_cast<int>(traffic_.size());
    traffic_.push_back(source);
    stats_.traffic.push_back({source.name, 0, 0, 0});
    for (std::int64_t i = 0; i < source.total_packets; ++i)
        schedule(source.start + source.interval * i, source.destination,
                 TrafficDelivery{index, i});
}

void Simulator::schedule(SimTime at, AgentId target, EventPayload payload) {
    if (at < now_)
        throw std::logic_error("event scheduled in the past");
    queue_.push(Event{at, next_seq_++, target, std::move(payload)});
}

void Simulator::run_until(SimTime end) {
    while (!queue_.empty() && queue_.top().time <= end) {
        Event event = queue_.top();
        queue_.pop();
        now_ = event.time;
        dispatch(event);
    }
    if (now_ < end) now_ = end;
}

void Simulator::schedule_timer(Agent& who, SimTime delay, std::uint64_t cookie) {
    schedule(now_ + delay, who.id_, TimerFired{cookie});
}

void Simulator::send_air(Agent& from, const wire::MgmtFrame& frame,
                         bool want_tx_confirm, std::uint64_t confirm_cookie) {
    if (!from.powered())
        throw std::logic_error("transmission from a powered-off agent: " + from.name());
    ++stats_.air_frames[wire::frame_name(frame.body)];

    Vec2 tx_pos = from.position(now_);
    bool confirmed = false;
    bool broadcast = frame.dst_mac == wire::MacAddress::broadcast();
    for (Agent* agent : agents_) {
        if (agent == &from || !agent->powered()) continue;
        if (agent->tuned_channel() != std::optional<std::uint8_t>{frame.channel})
            continue;
        auto mac = agent->radio_mac();
        if (!mac) continue;
        bool addressed = *mac == frame.dst_mac;
        if (!broadcast && !addressed) continue;
        double rss = radio_.rss_dbm(distance(tx_pos, agent->position(now_)));
        if (!radio_.deliverable(rss)) continue;
        schedule(now_ + links_.air_latency, agent->id(),
                 WirelessDelivery{frame, wire::Rss::from_dbm(rss)});
        if (addressed) confirmed = true;
    }
    if (want_tx_confirm && confirmed)
        schedule(now_ + links_.air_latency * 2, from.id(), TxConfirm{confirm_cookie});
}

void Simulator::send_lan(Agent& from, const wire::IappPacket& packet) {
    if (!from.powered())
        throw std::logic_error("wired send from a powered-off agent: " + from.name());
    auto segment = from.lan_segment();
    if (!segment)
        throw std::logic_error("wired send from an agent without a segment: " + from.name());
    ++stats_.lan_packets[wire::iapp_name(packet.body)];

    if (packet.dst_ip.is_multicast()) {
        for (Agent* agent : agents_) {
            if (agent == &from || !agent->powered()) continue;
            if (agent->lan_segment() != segment) continue;
            schedule(now_ + links_.lan_latency, agent->id(), LanDelivery{packet});
        }
        return;
    }
    for (Agent* agent : agents_) {
        if (agent->lan_ip() == std::optional<wire::Ipv4>{packet.dst_ip}) {
            schedule(now_ + links_.lan_latency, agent->id(), LanDelivery{packet});
            return;
        }
    }
    log_line("[" + now_.ms_string() + "] " + from.name() +
             " wired packet to unknown address " + packet.dst_ip.to_string() + " dropped");
}

void Simulator::note(const Agent& who, const std::string& text) {
    log_line("[" + now_.ms_string() + "] " + who.name() + " " + text);
}

void Simulator::log_line(const std::string& text) {
    log_ += text;
    log_ += '\n';
}

void Simulator::dispatch(const Event& event) {
    Agent& target = *agents_.at(static_cast<std::size_t>(event.target));
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, PowerOn>) {
                target.powered_ = true;
                note(target, "powered on");
                target.on_power_on(*this);
            } else if constexpr (std::is_same_v<T, PowerOff>) {
                target.powered_ = false;
                note(target, "powered off");
                target.on_power_off(*this);
            } else if constexpr (std::is_same_v<T, WirelessDelivery>) {
                if (!target.powered()) return;
                note(target, std::string("rx ") + wire::frame_name(payload.frame.body) +
                                 " from " + payload.frame.src_mac.to_string() + " rss " +
                                 payload.rss.to_string());
                target.on_wireless(*this, payload.frame, payload.rss);
            } else if constexpr (std::is_same_v<T, LanDelivery>) {
                if (!target.powered()) return;
                note(target, std::string("rx ") + wire::iapp_name(payload.packet.body) +
                                 " from " + payload.packet.src_ip.to_string());
                target.on_lan(*this, payload.packet);
            } else if constexpr (std::is_same_v<T, TimerFired>) {
                if (!target.powered()) return;
                target.on_timer(*this, payload.cookie);
            } else if constexpr (std::is_same_v<T, TxConfirm>) {
                if (!target.powered()) return;
                target.on_tx_confirm(*this, payload.cookie);
            } else {
                static_assert(std::is_same_v<T, TrafficDelivery>);
                auto& counters = stats_.traffic.at(static_cast<std::size_t>(payload.source));
                ++counters.sent;
                if (target.powered() && target.traffic_ready()) {
                    ++counters.delivered;
                } else {
                    ++counters.lost;
                    note(target, "payload packet " + std::to_string(payload.index) +
                                     " from " + counters.source + " lost");
                }
            }
        },
        event.payload);
}

}  // namespace andwc::simnet
