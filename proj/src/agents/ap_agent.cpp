#include "andwc/agents/ap_agent.hpp"

#include <algorithm>
#include <stdexcept>

namespace andwc::agents {

using simnet::Simulator;

namespace {

constexpr std::uint64_t kTimerCollection = 1;
constexpr std::uint64_t kTimerBeacon = 2;
constexpr std::uint64_t kTimerProbe = 3;
constexpr std::uint64_t kTimerAuth = 4;
constexpr std::uint64_t kTimerAssoc = 5;
constexpr std::uint64_t kVerifyBit = std::uint64_t{1} << 32;
constexpr std::uint64_t kGenMask = kVerifyBit - 1;

}  // namespace

std::vector<wire::MacAddress> build_mac_list(std::vector<wire::MacAddress> macs) {
    std::sort(macs.begin(), macs.end());
    macs.erase(std::unique(macs.begin(), macs.end()), macs.end());
    return macs;
}

std::optional<wire::MacAddress> successor_of(const std::vector<wire::MacAddress>& mac_list,
                                             const wire::MacAddress& self) {
    auto it = std::upper_bound(mac_list.begin(), mac_list.end(), self);
    if (it == mac_list.end()) return std::nullopt;
    return *it;
}

bool neighbor_order(const wire::ApInfoEntry& a, const wire::ApInfoEntry& b) {
    auto a_rss = a.rss ? a.rss->half_db : INT16_MIN;
    auto b_rss = b.rss ? b.rss->half_db : INT16_MIN;
    if (a_rss != b_rss) return a_rss > b_rss;
    return a.mac < b.mac;
}

ApAgent::ApAgent(std::string name, Config config)
    : Agent(std::move(name)), config_(std::move(config)) {
    config_.self.validate();
    config_.self.real_neighbor = false;
    config_.self.rss.reset();
}

const char* ApAgent::phase_name(Phase phase) {
    switch (phase) {
        case Phase::Off:          return "off";
        case Phase::Collecting:   return "collecting";
        case Phase::Voted:        return "voted";
        case Phase::AirVerifying: return "air-verifying";
        case Phase::Operational:  return "operational";
    }
    return "?";
}

std::optional<std::uint8_t> ApAgent::tuned_channel() const {
    if (phase_ == Phase::Off) return std::nullopt;
    if (channel_override_) return channel_override_;
    return config_.self.channel;
}

void ApAgent::set_phase(Simulator& sim, Phase phase) {
    phase_ = phase;
    sim.note(*this, std::string("phase -> ") + phase_name(phase));
    sim.stats().phases.push_back({name(), phase_name(phase), sim.now()});
}

void ApAgent::on_power_on(Simulator& sim) {
    set_phase(sim, Phase::Collecting);
    apinfo_[config_.self.mac] = config_.self;
    send_iapp(sim, wire::Ipv4::iapp_multicast(), wire::ApInfoReq{config_.self});
    sim.schedule_timer(*this, config_.timing.collection_window, kTimerCollection);
}

wire::ApInfoEntry& ApAgent::upsert_entry(const wire::ApInfoEntry& seen) {
    auto [it, inserted] = apinfo_.try_emplace(seen.mac, seen);
    auto& entry = it->second;
    if (inserted) {
        // Never trust the sender's own view of link state.
        entry.real_neighbor = false;
        entry.rss.reset();
    } else {
        entry.ssid = seen.ssid;
        entry.bssid = seen.bssid;
        entry.ip = seen.ip;
        entry.channel = seen.channel;
        entry.beacon_interval_ms = seen.beacon_interval_ms;
    }
    return entry;
}

void ApAgent::mark_real(Simulator& sim, const wire::ApInfoEntry& seen, wire::Rss rss) {
    auto& entry = upsert_entry(seen);
    entry.real_neighbor = true;
    entry.rss = rss;
    real_neighbours_.clear();
    for (const auto& [mac, e] : apinfo_)
        if (e.real_neighbor && mac != config_.self.mac) real_neighbours_.push_back(e);
    std::sort(real_neighbours_.begin(), real_neighbours_.end(), neighbor_order);
    sim.note(*this, "neighbor " + seen.mac.to_string() + " real, rss " + rss.to_string());
}

void ApAgent::send_iapp(Simulator& sim, const wire::Ipv4& dst, wire::IappBody body) {
    sim.send_lan(*this, wire::IappPacket{config_.self.ip, dst, std::move(body)});
}

void ApAgent::send_frame(Simulator& sim, const wire::MacAddress& dst,
                         std::uint8_t channel, wire::FrameBody body) {
    sim.send_air(*this, wire::MgmtFrame{config_.self.mac, dst, channel, std::move(body)});
}

void ApAgent::on_lan(Simulator& sim, const wire::IappPacket& packet) {
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, wire::ApInfoReq>) {
                handle_apinfo_req(sim, body, packet.src_ip);
            } else if constexpr (std::is_same_v<T, wire::ApInfoRes>) {
                handle_apinfo_res(sim, body);
            } else if constexpr (std::is_same_v<T, wire::Permission>) {
                handle_permission(sim, body);
            } else if constexpr (std::is_same_v<T, wire::NewNeighbourReq>) {
                if (phase_ != Phase::Operational) {
                    sim.note(*this, "neighbour introduction ignored while " +
                                        std::string(phase_name(phase_)));
                    return;
                }
                auto& entry = upsert_entry(body.sender);
                mark_real(sim, body.sender,
                          entry.rss ? *entry.rss : config_.timing.unmeasured_link_rss);
                send_iapp(sim, body.sender.ip, wire::NewNeighbourRes{config_.self});
            } else {
                static_assert(std::is_same_v<T, wire::NewNeighbourRes>);
                auto& entry = upsert_entry(body.sender);
                mark_real(sim, body.sender,
                          entry.rss ? *entry.rss : config_.timing.unmeasured_link_rss);
            }
        },
        packet.body);
}

void ApAgent::handle_apinfo_req(Simulator& sim, const wire::ApInfoReq& req,
                                const wire::Ipv4& caller_ip) {
    upsert_entry(req.sender);
    if (i_am_the_last_) {
        // The caller joined an established set: it takes over the tail of the
        // sequence, and this AP points at it.
        next_mac_ = req.sender.mac;
        i_am_the_last_ = false;
        sim.note(*this, "tail handed to joiner " + req.sender.mac.to_string());
        send_iapp(sim, caller_ip, wire::ApInfoRes{config_.self, true, true});
        if (finished_) {
            bool recipient_is_tail =
                !mac_list_.empty() && req.sender.mac == mac_list_.back();
            send_iapp(sim, caller_ip, wire::Permission{recipient_is_tail});
            sim.note(*this, "verification permission granted to joiner");
        }
    } else {
        send_iapp(sim, caller_ip, wire::ApInfoRes{config_.self, false, false});
    }
}

void ApAgent::handle_apinfo_res(Simulator& sim, const wire::ApInfoRes& res) {
    if (phase_ != Phase::Collecting) {
        sim.note(*this, "census response after deadline ignored");
        return;
    }
    upsert_entry(res.sender);
    if (res.new_ap && !sequence_pinned_) {
        // Joined an established set: this AP is the new tail and must wait
        // for explicit permission regardless of its mac.
        i_am_the_last_ = true;
        sequence_pinned_ = true;
        sim.note(*this, "joined an established set; waiting at the tail");
    }
}

void ApAgent::handle_permission(Simulator& sim, const wire::Permission& permission) {
    switch (phase_) {
        case Phase::Collecting:
            // Granted faster than the census window closes; act on it at the vote.
            pending_permission_ = permission;
            sim.note(*this, "verification permission buffered until vote");
            return;
        case Phase::Voted:
            accept_permission(sim, permission);
            return;
        default:
            sim.note(*this, "duplicate verification permission ignored");
    }
}

void ApAgent::accept_permission(Simulator& sim, const wire::Permission&) {
    // Own state decides the tail question. The packet flag reflects the
    // grantor's census and goes stale the moment a joiner claims this AP's
    // old tail slot, so it must not reset next_mac here.
    if (i_am_the_last_) next_mac_.reset();
    begin_air_verification(sim);
}

void ApAgent::on_timer(Simulator& sim, std::uint64_t cookie) {
    if (cookie & kVerifyBit) {
        if (phase_ != Phase::AirVerifying) return;
        if ((cookie & kGenMask) != (verify_generation_ & kGenMask)) return;  // stale
        const auto& target = targets_.at(target_index_);
        if (retries_left_ > 0) {
            --retries_left_;
            sim.note(*this, "verification probe to " + target.to_string() + " retransmitted");
            send_frame(sim, target, apinfo_.at(target).channel,
                       wire::ApInfoReqFrame{config_.self});
            sim.schedule_timer(*this, config_.timing.air_verify_timeout,
                               kVerifyBit | (verify_generation_ & kGenMask));
            return;
        }
        sim.note(*this, "neighbor " + target.to_string() + " silent; not a real neighbor");
        if (verification_row_ >= 0)
            ++sim.stats().verifications.at(static_cast<std::size_t>(verification_row_)).silent;
        ++target_index_;
        verify_next(sim);
        return;
    }

    switch (cookie) {
        case kTimerCollection:
            finalize_voting(sim);
            return;
        case kTimerBeacon:
            if (phase_ != Phase::Operational) return;
            emit_beacon(sim);
            sim.schedule_timer(
                *this, SimTime::from_us(config_.self.beacon_interval_ms * 1000),
                kTimerBeacon);
            return;
        case kTimerProbe: {
            if (probe_queue_.empty()) return;
            auto dst = probe_queue_.front();
            probe_queue_.pop_front();
            send_frame(sim, dst, config_.self.channel, wire::ProbeRes{config_.self});
            return;
        }
        case kTimerAuth: {
            if (auth_queue_.empty()) return;
            auto dst = auth_queue_.front();
            auth_queue_.pop_front();
            authenticated_.insert(dst);
            send_frame(sim, dst, config_.self.channel, wire::AuthRes{true});
            return;
        }
        case kTimerAssoc: {
            if (assoc_queue_.empty()) return;
            auto dst = assoc_queue_.front();
            assoc_queue_.pop_front();
            bool accepted = authenticated_.count(dst) > 0;
            send_frame(sim, dst, config_.self.channel, wire::AssocRes{accepted});
            if (accepted) sim.note(*this, "station " + dst.to_string() + " associated");
            return;
        }
        default:
            return;
    }
}

void ApAgent::finalize_voting(Simulator& sim) {
    std::vector<wire::MacAddress> macs;
    macs.reserve(apinfo_.size());
    for (const auto& [mac, entry] : apinfo_) macs.push_back(mac);
    mac_list_ = build_mac_list(std::move(macs));

    bool starter = false;
    if (!sequence_pinned_) {
        i_am_the_last_ = mac_list_.back() == config_.self.mac;
        next_mac_ = successor_of(mac_list_, config_.self.mac);
        starter = mac_list_.front() == config_.self.mac;
    }
    // A pinned AP's tail state was dictated by the join handshake and it
    // never starts on its own, whatever its mac.

    std::string members;
    for (const auto& mac : mac_list_) members += " " + mac.to_string();
    sim.note(*this, "vote closed; members" + members +
                        (i_am_the_last_ ? " (this AP is the tail)" : ""));
    set_phase(sim, Phase::Voted);

    if (starter) {
        begin_air_verification(sim);
    } else if (pending_permission_) {
        auto permission = *pending_permission_;
        pending_permission_.reset();
        accept_permission(sim, permission);
    }
}

void ApAgent::begin_air_verification(Simulator& sim) {
    set_phase(sim, Phase::AirVerifying);
    verification_row_ = static_cast<int>(sim.stats().verifications.size());
    sim.stats().verifications.push_back({name(), sim.now(), std::nullopt, 0, 0});
    targets_.clear();
    for (const auto& [mac, entry] : apinfo_)
        if (mac != config_.self.mac && !entry.real_neighbor) targets_.push_back(mac);
    target_index_ = 0;
    verify_next(sim);
}

void ApAgent::verify_next(Simulator& sim) {
    // Entries can have turned real since the pass was planned (mutual marking
    // from an earlier AP's pass); they are skipped, not re-measured.
    while (target_index_ < targets_.size() &&
           apinfo_.at(targets_[target_index_]).real_neighbor)
        ++target_index_;
    if (target_index_ >= targets_.size()) {
        complete_air_verification(sim);
        return;
    }
    const auto& target = targets_[target_index_];
    channel_override_ = apinfo_.at(target).channel;
    retries_left_ = 1;
    verify_generation_ = (verify_generation_ + 1) & kGenMask;
    send_frame(sim, target, *channel_override_, wire::ApInfoReqFrame{config_.self});
    sim.schedule_timer(*this, config_.timing.air_verify_timeout,
                       kVerifyBit | verify_generation_);
}

void ApAgent::complete_air_verification(Simulator& sim) {
    finished_ = true;
    channel_override_.reset();
    if (verification_row_ >= 0)
        sim.stats().verifications.at(static_cast<std::size_t>(verification_row_)).end =
            sim.now();

    if (i_am_the_last_) {
        next_mac_.reset();
        sim.note(*this, "verification pass complete; sequence finished");
    } else {
        if (!next_mac_ || !apinfo_.count(*next_mac_))
            throw std::logic_error(name() + ": no successor to hand verification to");
        bool recipient_is_tail = !mac_list_.empty() && *next_mac_ == mac_list_.back();
        send_iapp(sim, apinfo_.at(*next_mac_).ip, wire::Permission{recipient_is_tail});
        sim.note(*this, "verification pass complete; permission to " +
                            next_mac_->to_string());
    }
    set_phase(sim, Phase::Operational);
    emit_beacon(sim);
    sim.schedule_timer(*this,
                       SimTime::from_us(config_.self.beacon_interval_ms * 1000),
                       kTimerBeacon);
}

void ApAgent::emit_beacon(Simulator& sim) {
    wire::Beacon beacon(config_.self, real_neighbours_);
    send_frame(sim, wire::MacAddress::broadcast(), config_.self.channel,
               std::move(beacon));
}

void ApAgent::on_wireless(Simulator& sim, const wire::MgmtFrame& frame, wire::Rss rss) {
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, wire::ApInfoReqFrame>) {
                bool known = apinfo_.count(body.sender.mac) > 0;
                if (!known) {
                    // Over-the-air proof of adjacency from an AP the census
                    // never reported: record it outright.
                    mark_real(sim, body.sender, rss);
                } else {
                    upsert_entry(body.sender);
                }
                send_frame(sim, frame.src_mac, config_.self.channel,
                           wire::ApInfoResFrame{config_.self, rss});
            } else if constexpr (std::is_same_v<T, wire::ApInfoResFrame>) {
                if (phase_ == Phase::AirVerifying && target_index_ < targets_.size() &&
                    targets_[target_index_] == frame.src_mac) {
                    verify_generation_ = (verify_generation_ + 1) & kGenMask;
                    mark_real(sim, body.sender, body.measured_rss_of_req);
                    if (verification_row_ >= 0)
                        ++sim.stats()
                              .verifications
                              .at(static_cast<std::size_t>(verification_row_))
                              .verified;
                    send_frame(sim, frame.src_mac, frame.channel,
                               wire::ApInfoAckFrame{config_.self, rss});
                    ++target_index_;
                    verify_next(sim);
                } else {
                    sim.note(*this, "unexpected verification response ignored");
                }
            } else if constexpr (std::is_same_v<T, wire::ApInfoAckFrame>) {
                // The caller heard our response; the link is proven both ways.
                mark_real(sim, body.sender, body.rss_of_response);
            } else if constexpr (std::is_same_v<T, wire::ApInfoUpdateFrame>) {
                if (phase_ != Phase::Operational) {
                    sim.note(*this, "station neighbor report ignored while " +
                                        std::string(phase_name(phase_)));
                    return;
                }
                sim.note(*this, "station reports previous AP " +
                                    body.old_ap.mac.to_string() + "; introducing myself");
                send_iapp(sim, body.old_ap.ip, wire::NewNeighbourReq{config_.self});
            } else if constexpr (std::is_same_v<T, wire::ProbeReq>) {
                probe_queue_.push_back(frame.src_mac);
                sim.schedule_timer(*this, config_.timing.probe_service_delay, kTimerProbe);
            } else if constexpr (std::is_same_v<T, wire::AuthReq>) {
                if (phase_ != Phase::Operational) return;
                auth_queue_.push_back(body.ms_id);
                sim.schedule_timer(*this, config_.timing.auth_service_delay, kTimerAuth);
            } else if constexpr (std::is_same_v<T, wire::AssocReq>) {
                if (phase_ != Phase::Operational) return;
                assoc_queue_.push_back(body.ms_id);
                sim.schedule_timer(*this, config_.timing.assoc_service_delay, kTimerAssoc);
            } else {
                // Beacons and station-bound responses are not for APs.
                (void)body;
            }
        },
        frame.body);
}

}  // namespace andwc::agents
