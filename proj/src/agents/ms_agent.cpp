#include "andwc/agents/ms_agent.hpp"

#include <utility>

namespace andwc::agents {

using simnet::Simulator;

namespace {

// Timer cookies: low byte is the kind, the rest a generation counter so a
// superseded attempt or scan cannot be driven by its leftover timers.
constexpr std::uint64_t kAuthTimeout = 1;
constexpr std::uint64_t kDeadline = 2;
constexpr std::uint64_t kSwitch = 3;
constexpr std::uint64_t kMinDwell = 4;
constexpr std::uint64_t kMaxDwell = 5;
constexpr std::uint64_t kBackoff = 6;

constexpr std::uint64_t cookie_of(std::uint64_t kind, std::uint64_t gen) {
    return kind | (gen << 8);
}
constexpr std::uint64_t kind_of(std::uint64_t cookie) { return cookie & 0xFF; }
constexpr std::uint64_t gen_of(std::uint64_t cookie) { return cookie >> 8; }

}  // namespace

MsAgent::MsAgent(std::string name, Config config)
    : Agent(std::move(name)), config_(std::move(config)) {
    config_.scan.validate();
    if (config_.initial_ap) config_.initial_ap->validate();
}

const char* MsAgent::mode_name(Mode mode) {
    switch (mode) {
        case Mode::Idle:       return "idle";
        case Mode::Associated: return "associated";
        case Mode::HandingOff: return "handing-off";
        case Mode::FullScan:   return "scanning";
    }
    return "?";
}

void MsAgent::set_mode(Simulator& sim, Mode mode) {
    mode_ = mode;
    sim.note(*this, std::string("mode -> ") + mode_name(mode));
    sim.stats().phases.push_back({name(), mode_name(mode), sim.now()});
}

void MsAgent::on_power_on(Simulator& sim) {
    if (config_.initial_ap) {
        serving_ = config_.initial_ap;
        channel_ = serving_->channel;
        set_mode(sim, Mode::Associated);
        sim.note(*this, "associated with " + serving_->mac.to_string() + " at boot");
    } else {
        begin_full_scan(sim);
    }
}

void MsAgent::on_wireless(Simulator& sim, const wire::MgmtFrame& frame, wire::Rss rss) {
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, wire::Beacon>) {
                handle_beacon(sim, body, rss);
            } else if constexpr (std::is_same_v<T, wire::ProbeRes>) {
                if (mode_ == Mode::FullScan && channel_ && frame.channel == *channel_) {
                    ++hits_this_channel_;
                    hits_.push_back({body.ap, rss, *channel_});
                }
            } else if constexpr (std::is_same_v<T, wire::AuthRes>) {
                handle_auth_res(sim, frame, body, rss);
            } else if constexpr (std::is_same_v<T, wire::AssocRes>) {
                handle_assoc_res(sim, frame, body);
            } else {
                // Requests and AP-to-AP traffic are not for stations.
                (void)body;
            }
        },
        frame.body);
}

void MsAgent::handle_beacon(Simulator& sim, const wire::Beacon& beacon, wire::Rss rss) {
    if (mode_ != Mode::Associated || !serving_ || beacon.ap.mac != serving_->mac)
        return;
    serving_ = beacon.ap;
    if (config_.use_neighbor_cache) handoff_list_ = beacon.neighbor_list;
    if (rss.half_db < config_.handoff_threshold.half_db) start_handoff(sim, rss);
}

void MsAgent::start_handoff(Simulator& sim, wire::Rss trigger_rss) {
    sim.note(*this, "serving link at " + trigger_rss.to_string() + " dBm, below " +
                        config_.handoff_threshold.to_string() + "; handing off");
    trigger_rss_ = trigger_rss;
    previous_ap_ = serving_;
    serving_.reset();
    set_mode(sim, Mode::HandingOff);
    handoff_row_ = static_cast<int>(sim.stats().handoffs.size());
    sim.stats().handoffs.push_back(
        {name(), sim.now(), std::nullopt, 0, 0, false, std::string{}});
    candidate_ = 0;
    if (config_.use_neighbor_cache && !handoff_list_.empty()) {
        attempt_candidate(sim);
    } else {
        if (config_.use_neighbor_cache)
            sim.note(*this, "no cached candidates; falling back to a full scan");
        begin_full_scan(sim);
    }
}

void MsAgent::attempt_candidate(Simulator& sim) {
    if (candidate_ >= handoff_list_.size()) {
        sim.note(*this, "cached candidates exhausted; falling back to a full scan");
        begin_full_scan(sim);
        return;
    }
    const auto& target = handoff_list_[candidate_];
    sim.note(*this, "trying cached candidate " + target.mac.to_string() +
                        " on channel " + std::to_string(int(target.channel)));
    begin_auth(sim, target, target.rss, false);
}

void MsAgent::begin_auth(Simulator& sim, const wire::ApInfoEntry& target,
                         std::optional<wire::Rss> saved_rss, bool via_full_scan) {
    current_target_ = target;
    saved_rss_ = saved_rss;
    via_full_scan_ = via_full_scan;
    stage_ = Stage::Auth;
    tx_confirmed_ = false;
    retries_left_ = 1;
    ++attempt_generation_;
    channel_ = target.channel;
    sim.send_air(*this,
                 wire::MgmtFrame{config_.mac, target.mac, target.channel,
                                 wire::AuthReq{config_.mac}},
                 true, attempt_generation_);
    sim.schedule_timer(*this, config_.timing.auth_req_timeout,
                       cookie_of(kAuthTimeout, attempt_generation_));
}

void MsAgent::on_tx_confirm(Simulator&, std::uint64_t cookie) {
    if (stage_ == Stage::Auth && cookie == attempt_generation_) tx_confirmed_ = true;
}

void MsAgent::candidate_failed(Simulator& sim, const std::string& why) {
    sim.note(*this, "candidate " +
                        (current_target_ ? current_target_->mac.to_string() : "?") +
                        " failed: " + why);
    ++attempt_generation_;
    stage_ = Stage::None;
    current_target_.reset();
    if (via_full_scan_) {
        // The scan's own pick failed; back off and sweep again.
        set_mode(sim, Mode::Idle);
        sim.schedule_timer(*this, config_.timing.rescan_backoff, cookie_of(kBackoff, 0));
    } else {
        ++candidate_;
        attempt_candidate(sim);
    }
}

void MsAgent::handle_auth_res(Simulator& sim, const wire::MgmtFrame& frame,
                              const wire::AuthRes& res, wire::Rss rss) {
    if (stage_ != Stage::Auth || !current_target_ ||
        frame.src_mac != current_target_->mac) {
        sim.note(*this, "stray auth response ignored");
        return;
    }
    ++attempt_generation_;  // cancels the timeout and deadline timers
    if (!res.accepted) {
        candidate_failed(sim, "authentication rejected");
        return;
    }
    if (!via_full_scan_ && saved_rss_ && rss.half_db < saved_rss_->half_db) {
        candidate_failed(sim, "link now " + rss.to_string() +
                                  " dBm, weaker than advertised " +
                                  saved_rss_->to_string());
        return;
    }
    stage_ = Stage::Assoc;
    sim.send_air(*this, wire::MgmtFrame{config_.mac, current_target_->mac,
                                        current_target_->channel,
                                        wire::AssocReq{config_.mac}});
    sim.schedule_timer(*this, config_.timing.auth_response_deadline,
                       cookie_of(kDeadline, attempt_generation_));
}

void MsAgent::handle_assoc_res(Simulator& sim, const wire::MgmtFrame& frame,
                               const wire::AssocRes& res) {
    if (stage_ != Stage::Assoc || !current_target_ ||
        frame.src_mac != current_target_->mac) {
        sim.note(*this, "stray association response ignored");
        return;
    }
    ++attempt_generation_;
    if (!res.accepted) {
        candidate_failed(sim, "association rejected");
        return;
    }
    complete_association(sim);
}

void MsAgent::complete_association(Simulator& sim) {
    serving_ = current_target_;
    channel_ = serving_->channel;
    stage_ = Stage::None;
    current_target_.reset();

    if (handoff_row_ >= 0) {
        auto& row = sim.stats().handoffs.at(static_cast<std::size_t>(handoff_row_));
        row.complete = sim.now();
        row.candidates_tried =
            static_cast<int>(via_full_scan_ ? candidate_ : candidate_ + 1);
        row.via_full_scan = via_full_scan_;
        row.target = serving_->mac.to_string();
        ++handoffs_completed_;
    }
    set_mode(sim, Mode::Associated);
    sim.note(*this, "associated with " + serving_->mac.to_string());

    if (via_full_scan_ && config_.use_neighbor_cache && previous_ap_ &&
        previous_ap_->mac != serving_->mac) {
        // The new AP never advertised us its neighbors knew each other; tell
        // it who served us last so the two APs can introduce themselves.
        sim.note(*this, "reporting previous AP " + previous_ap_->mac.to_string() +
                            " to the new AP");
        sim.send_air(*this, wire::MgmtFrame{config_.mac, serving_->mac,
                                            serving_->channel,
                                            wire::ApInfoUpdateFrame{*previous_ap_}});
    }
    handoff_list_.clear();
    previous_ap_.reset();
    trigger_rss_.reset();
    handoff_row_ = -1;
    via_full_scan_ = false;
    candidate_ = 0;
}

void MsAgent::begin_full_scan(Simulator& sim) {
    set_mode(sim, Mode::FullScan);
    ++scan_generation_;
    scan_channel_index_ = 0;
    hits_.clear();
    scan_dwell_total_ = SimTime::from_us(0);
    scan_row_ = static_cast<int>(sim.stats().scans.size());
    sim.stats().scans.push_back(
        {name(), sim.now(), std::nullopt, SimTime::from_us(0), 0, 0});
    enter_channel(sim);
}

void MsAgent::enter_channel(Simulator& sim) {
    sim.schedule_timer(*this, config_.scan.channel_switch_time,
                       cookie_of(kSwitch, scan_generation_));
}

void MsAgent::leave_channel(Simulator& sim, SimTime dwell) {
    // Deaf while re-tuning: an answer arriving at the very instant the dwell
    // timer expires (or during a non-zero switch window) is not heard. This
    // keeps the channel occupancy rule strictly-before.
    channel_.reset();
    scan_dwell_total_ += dwell;
    ++scan_channel_index_;
    if (scan_channel_index_ < config_.scan.channels.size()) {
        enter_channel(sim);
    } else {
        finish_scan(sim);
    }
}

void MsAgent::finish_scan(Simulator& sim) {
    if (scan_row_ >= 0) {
        auto& row = sim.stats().scans.at(static_cast<std::size_t>(scan_row_));
        row.end = sim.now();
        row.total_dwell = scan_dwell_total_;
        row.channels = static_cast<int>(config_.scan.channels.size());
        row.responders = static_cast<int>(hits_.size());
        scan_row_ = -1;
    }
    // A station that dropped its link on a threshold crossing holds the
    // classic hysteresis bar against that reading; the cached scheme only
    // scans once its candidates are gone, so it takes the best on offer.
    std::optional<wire::Rss> bar;
    double hysteresis = 0.0;
    if (!config_.use_neighbor_cache && trigger_rss_) {
        bar = trigger_rss_;
        hysteresis = config_.timing.hysteresis_db;
    }
    auto choice = scanning::select_best(hits_, bar, hysteresis);
    if (!choice) {
        sim.note(*this, "scan found no usable AP; backing off");
        set_mode(sim, Mode::Idle);
        sim.schedule_timer(*this, config_.timing.rescan_backoff, cookie_of(kBackoff, 0));
        return;
    }
    sim.note(*this, "scan picked " + choice->ap.mac.to_string() + " at " +
                        choice->rss.to_string() + " dBm");
    set_mode(sim, Mode::HandingOff);
    begin_auth(sim, choice->ap, std::nullopt, true);
}

void MsAgent::on_timer(Simulator& sim, std::uint64_t cookie) {
    switch (kind_of(cookie)) {
        case kAuthTimeout: {
            if (stage_ != Stage::Auth || gen_of(cookie) != attempt_generation_) return;
            if (!tx_confirmed_ && retries_left_ > 0) {
                --retries_left_;
                sim.note(*this, "auth request unacknowledged; retransmitting");
                sim.send_air(*this,
                             wire::MgmtFrame{config_.mac, current_target_->mac,
                                             current_target_->channel,
                                             wire::AuthReq{config_.mac}},
                             true, attempt_generation_);
                sim.schedule_timer(*this, config_.timing.auth_req_timeout,
                                   cookie_of(kAuthTimeout, attempt_generation_));
                return;
            }
            if (!tx_confirmed_) {
                candidate_failed(sim, "no link-level acknowledgment");
                return;
            }
            // The request was acked, so the AP is there; give its response a
            // generous deadline instead of burning the candidate.
            sim.schedule_timer(*this, config_.timing.auth_response_deadline,
                               cookie_of(kDeadline, attempt_generation_));
            return;
        }
        case kDeadline:
            if (stage_ == Stage::None || gen_of(cookie) != attempt_generation_) return;
            candidate_failed(sim, "response deadline expired");
            return;
        case kSwitch: {
            if (mode_ != Mode::FullScan || gen_of(cookie) != scan_generation_) return;
            channel_ = config_.scan.channels.at(scan_channel_index_);
            hits_this_channel_ = 0;
            channel_entered_ = sim.now();
            if (handoff_row_ >= 0)
                ++sim.stats()
                      .handoffs.at(static_cast<std::size_t>(handoff_row_))
                      .probes_sent;
            sim.send_air(*this, wire::MgmtFrame{config_.mac,
                                                wire::MacAddress::broadcast(),
                                                *channel_, wire::ProbeReq{}});
            sim.schedule_timer(*this, config_.scan.min_channel_time,
                               cookie_of(kMinDwell, scan_generation_));
            return;
        }
        case kMinDwell:
            if (mode_ != Mode::FullScan || gen_of(cookie) != scan_generation_) return;
            if (hits_this_channel_ > 0) {
                sim.schedule_timer(
                    *this,
                    config_.scan.max_channel_time - config_.scan.min_channel_time,
                    cookie_of(kMaxDwell, scan_generation_));
            } else {
                leave_channel(sim, sim.now() - channel_entered_);
            }
            return;
        case kMaxDwell:
            if (mode_ != Mode::FullScan || gen_of(cookie) != scan_generation_) return;
            leave_channel(sim, sim.now() - channel_entered_);
            return;
        case kBackoff:
            if (mode_ != Mode::Idle) return;
            sim.note(*this, "rescanning");
            begin_full_scan(sim);
            return;
        default:
            return;
    }
}

}  // namespace andwc::agents
