#include "andwc/harness/runner.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "andwc/agents/ap_agent.hpp"
#include "andwc/agents/ms_agent.hpp"
#include "andwc/simnet/simulator.hpp"

namespace andwc::harness {

namespace {

agents::ProtocolTiming make_timing(const Scenario& sc) {
    agents::ProtocolTiming t;
    t.collection_window = sc.timing.collection_window;
    t.air_verify_timeout = sc.timing.air_verify_timeout;
    t.auth_service_delay = sc.timing.auth_service_delay;
    t.assoc_service_delay = sc.timing.assoc_service_delay;
    t.probe_service_delay = sc.timing.probe_response_latency - sc.links.air_latency * 2;
    t.auth_req_timeout = sc.timing.auth_req_timeout;
    t.auth_response_deadline = sc.timing.auth_response_deadline;
    t.rescan_backoff = sc.timing.rescan_backoff;
    t.hysteresis_db = sc.timing.hysteresis_db;
    // A neighbor learned over the wire has no measured link yet; it files at
    // the bottom of the strength order until some frame measures it.
    t.unmeasured_link_rss = wire::Rss::from_dbm(sc.radio.range_cutoff_dbm);
    return t;
}

scanning::ScanConfig make_scan_config(const Scenario& sc) {
    return {sc.channels, sc.timing.min_channel_time, sc.timing.max_channel_time,
            sc.timing.beacon_interval, sc.timing.channel_switch_time};
}

std::string mode_label(const Scenario& sc, ForceMode force) {
    if (force == ForceMode::NeighborCache) return "andwc";
    if (force == ForceMode::BaselineFullScan) return "baseline";
    bool any_cached = false, any_baseline = false;
    for (const auto& ms : sc.stations) {
        (ms.mode == StationMode::NeighborCache ? any_cached : any_baseline) = true;
    }
    if (any_cached && any_baseline) return "mixed";
    if (any_baseline) return "baseline";
    return "andwc";
}

bool within(double value, const Bounds& b) {
    if (b.min && value < *b.min) return false;
    if (b.max && value > *b.max) return false;
    return true;
}

std::string bounds_text(const Bounds& b) {
    std::ostringstream os;
    os << "[";
    if (b.min) os << *b.min;
    else os << "-inf";
    os << ", ";
    if (b.max) os << *b.max;
    else os << "inf";
    os << "]";
    return os.str();
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc, std::optional<std::uint64_t> seed_override,
                        ForceMode force) {
    const std::uint64_t seed = seed_override.value_or(sc.seed);
    simnet::Simulator sim(sc.radio, sc.links);

    const auto timing = make_timing(sc);
    const auto scan = make_scan_config(sc);

    // Every AP consumes exactly one draw, jittered or not, so adding jitter
    // to one AP never shifts another's power-on time under the same seed.
    std::mt19937_64 rng(seed);
    std::vector<std::unique_ptr<agents::ApAgent>> aps;
    std::map<std::string, SimTime> resolved_on;
    for (const auto& spec : sc.aps) {
        SimTime base = spec.power_on;
        if (spec.power_on_after_id) base += resolved_on.at(*spec.power_on_after_id);
        const std::uint64_t draw = rng();
        SimTime jitter =
            spec.power_on_jitter.us > 0
                ? SimTime::from_us(static_cast<std::int64_t>(
                      draw % static_cast<std::uint64_t>(spec.power_on_jitter.us + 1)))
                : SimTime{};
        const SimTime on = base + jitter;
        resolved_on[spec.id] = on;

        agents::ApAgent::Config cfg{sc.ap_entry(spec), spec.position, spec.segment,
                                    timing};
        aps.push_back(std::make_unique<agents::ApAgent>(spec.id, std::move(cfg)));
        sim.add_agent(*aps.back(), on, spec.power_off);
    }

    std::vector<std::unique_ptr<agents::MsAgent>> stations;
    std::map<std::string, simnet::AgentId> station_ids;
    for (const auto& spec : sc.stations) {
        bool cached = spec.mode == StationMode::NeighborCache;
        if (force == ForceMode::NeighborCache) cached = true;
        if (force == ForceMode::BaselineFullScan) cached = false;

        agents::MsAgent::Config cfg;
        cfg.mac = spec.mac;
        cfg.mobility = simnet::LinearMobility(spec.start_position, spec.velocity_mps,
                                              spec.motion_start);
        cfg.handoff_threshold = spec.handoff_threshold;
        cfg.scan = scan;
        cfg.timing = timing;
        cfg.use_neighbor_cache = cached;
        if (spec.initial_ap_id)
            cfg.initial_ap = sc.ap_entry(*sc.find_ap(*spec.initial_ap_id));

        stations.push_back(std::make_unique<agents::MsAgent>(spec.id, std::move(cfg)));
        station_ids[spec.id] = sim.add_agent(*stations.back(), SimTime{});
    }

    for (const auto& t : sc.traffic)
        sim.add_traffic({t.name, station_ids.at(t.destination), t.start, t.interval,
                         t.total_packets});

    sim.run_until(sc.duration);

    RunOutcome out;
    out.scenario_name = sc.name;
    out.band = sc.band;
    out.mode_label = mode_label(sc, force);
    out.seed = seed;
    out.duration = sc.duration;
    out.scan_channels = static_cast<int>(sc.channels.size());
    out.stats = sim.stats();
    out.event_log = sim.event_log();

    for (const auto& ap : aps) {
        RunOutcome::ApFinal f;
        f.id = ap->name();
        f.mac = ap->self_entry().mac.to_string();
        f.phase = agents::ApAgent::phase_name(ap->phase());
        f.finished = ap->finished();
        for (const auto& n : ap->real_neighbours()) f.neighbors.push_back(n.mac.to_string());
        out.aps.push_back(std::move(f));
    }
    for (const auto& ms : stations) {
        RunOutcome::MsFinal f;
        f.id = ms->name();
        f.mode = agents::MsAgent::mode_name(ms->mode());
        if (ms->serving_ap()) f.serving_mac = ms->serving_ap()->mac.to_string();
        f.handoffs_completed = ms->handoffs_completed();
        out.stations.push_back(std::move(f));
    }
    return out;
}

std::vector<ExpectCheck> check_expectations(const Scenario& sc,
                                            const RunOutcome& out) {
    std::vector<ExpectCheck> checks;
    auto add = [&](bool ok, std::string text) {
        checks.push_back({ok, std::move(text)});
    };

    for (const auto& he : sc.expect.handoffs) {
        std::vector<const simnet::RunStats::Handoff*> completed;
        for (const auto& row : out.stats.handoffs)
            if (row.ms == he.station && row.complete) completed.push_back(&row);

        if (he.count) {
            add(static_cast<int>(completed.size()) == *he.count,
                he.station + ": " + std::to_string(completed.size()) +
                    " completed handoffs, expected " + std::to_string(*he.count));
        }
        const auto* first = completed.empty() ? nullptr : completed.front();
        if (he.latency_ms) {
            if (!first) {
                add(false, he.station + ": no completed handoff to measure");
            } else {
                SimTime latency = *first->complete - first->trigger;
                add(within(latency.ms(), *he.latency_ms),
                    he.station + ": handoff latency " + latency.ms_string() +
                        " ms, expected " + bounds_text(*he.latency_ms));
            }
        }
        if (he.via_full_scan) {
            if (!first) {
                add(false, he.station + ": no completed handoff to inspect");
            } else {
                add(first->via_full_scan == *he.via_full_scan,
                    he.station + ": handoff used " +
                        std::string(first->via_full_scan ? "a full scan"
                                                         : "the cached list") +
                        ", expected " +
                        (*he.via_full_scan ? "a full scan" : "the cached list"));
            }
        }
        if (he.target) {
            auto mac = sc.find_ap(*he.target)->mac.to_string();
            if (!first) {
                add(false, he.station + ": no completed handoff to inspect");
            } else {
                add(first->target == mac, he.station + ": joined " + first->target +
                                              ", expected " + *he.target + " (" + mac +
                                              ")");
            }
        }
    }

    for (const auto& le : sc.expect.packet_loss) {
        std::int64_t lost = 0;
        bool found = false;
        for (const auto& row : out.stats.traffic) {
            if (le.source && row.source != *le.source) continue;
            lost += row.lost;
            found = true;
        }
        std::string which = le.source ? *le.source : "all streams";
        if (!found) {
            add(false, which + ": no traffic recorded");
        } else {
            add(within(static_cast<double>(lost), le.packets_lost),
                which + ": " + std::to_string(lost) + " packets lost, expected " +
                    bounds_text(le.packets_lost));
        }
    }

    if (sc.expect.all_aps_operational) {
        std::string laggard;
        for (const auto& ap : out.aps)
            if (ap.phase != "operational" || !ap.finished) laggard = ap.id;
        add(laggard.empty(), laggard.empty()
                                 ? "all APs operational with finished verification"
                                 : laggard + " did not reach operational");
    }

    if (sc.expect.verification_mutual_exclusion) {
        auto rows = out.stats.verifications;
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.begin < b.begin; });
        bool ok = true;
        std::string why;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].end) {
                ok = false;
                why = rows[i].ap + " never finished its pass";
                break;
            }
            if (i + 1 < rows.size() && *rows[i].end > rows[i + 1].begin) {
                ok = false;
                why = rows[i].ap + " and " + rows[i + 1].ap + " overlapped";
                break;
            }
        }
        add(ok, ok ? "verification passes never overlapped"
                   : "verification overlap: " + why);
    }

    if (sc.expect.air_verification_frames) {
        auto frames = out.stats.air_frame_count("ApInfoReqFrame") +
                      out.stats.air_frame_count("ApInfoResFrame") +
                      out.stats.air_frame_count("ApInfoAckFrame");
        add(frames == *sc.expect.air_verification_frames,
            "verification frames on air: " + std::to_string(frames) + ", expected " +
                std::to_string(*sc.expect.air_verification_frames));
    }

    return checks;
}

}  // namespace andwc::harness
