// Release gate. Each numbered check prints one [PASS]/[FAIL] line with the
// measured numbers; the process exits nonzero if anything fails. Unlike the
// unit suites this runs whole scenarios end to end, so it exercises the
// library the way the command-line tool does.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "andwc/agents/ap_agent.hpp"
#include "andwc/harness/report.hpp"
#include "andwc/harness/runner.hpp"
#include "andwc/harness/scenario.hpp"
#include "andwc/scanning/scan.hpp"

using namespace andwc;
using agents::ApAgent;
using harness::ForceMode;
using harness::RunOutcome;
using simnet::LinkConfig;
using simnet::RadioModel;
using simnet::SimTime;
using simnet::Simulator;
using simnet::Vec2;
using wire::ApInfoEntry;
using wire::Ipv4;
using wire::MacAddress;
using wire::Rss;

namespace {

int g_failures = 0;

void report(int index, const std::string& label, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " " << index << ". " << label;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

harness::Scenario load(const char* file) {
    return harness::load_scenario_file(std::string(SCENARIO_DIR) + "/" + file);
}

// First completed handoff of the run, in milliseconds.
std::optional<double> first_latency_ms(const RunOutcome& out) {
    for (const auto& h : out.stats.handoffs)
        if (h.complete)
            return (h.complete->us - h.trigger.us) / 1000.0;
    return std::nullopt;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

MacAddress mac_of(std::uint8_t tag) { return MacAddress{{0x02, 0, 0, 0, 0, tag}}; }

ApAgent::Config ap_config(std::uint8_t tag, std::uint8_t channel, Vec2 pos) {
    ApAgent::Config cfg;
    cfg.self = ApInfoEntry("cell", mac_of(tag), mac_of(tag), Ipv4{{10, 0, 0, tag}},
                           channel, 100);
    cfg.position = pos;
    return cfg;
}

// N access points on a circle, booted at the given per-AP offsets. Returns
// everything the determinism and message-economy checks compare.
struct WorldRun {
    bool all_operational = true;
    std::vector<std::string> mac_lists;       // one rendering per AP
    std::vector<std::string> sequence;        // verification rows, in order
    std::vector<std::string> neighbor_lists;  // one rendering per AP
    std::vector<SimTime> durations;           // per verification row
    bool rows_closed = true;
    std::int64_t verify_frames = 0;           // probe + response + ack, over the air
};

WorldRun run_circle(int n, const std::vector<int>& boot_ms, double radius) {
    std::vector<std::unique_ptr<ApAgent>> aps;
    for (int i = 0; i < n; ++i) {
        auto tag = static_cast<std::uint8_t>(i + 1);
        double angle = 2.0 * M_PI * i / n;
        Vec2 pos{100.0 + radius * std::cos(angle), 100.0 + radius * std::sin(angle)};
        aps.push_back(std::make_unique<ApAgent>("ap" + std::to_string(i + 1),
                                                ap_config(tag, tag, pos)));
    }
    Simulator sim(RadioModel{}, LinkConfig{});
    for (int i = 0; i < n; ++i)
        sim.add_agent(*aps[i], SimTime::from_ms(boot_ms[i]));
    sim.run_until(SimTime::from_ms(400));

    WorldRun out;
    for (const auto& ap : aps) {
        if (ap->phase() != ApAgent::Phase::Operational || !ap->finished())
            out.all_operational = false;
        std::string macs;
        for (const auto& m : ap->mac_list()) macs += m.to_string() + " ";
        out.mac_lists.push_back(macs);
        std::string neigh;
        for (const auto& e : ap->real_neighbours())
            neigh += e.mac.to_string() + "@" +
                     (e.rss ? e.rss->to_string() : "?") +
                     (e.real_neighbor ? "!" : "") + " ";
        out.neighbor_lists.push_back(neigh);
    }
    for (const auto& row : sim.stats().verifications) {
        out.sequence.push_back(row.ap + ":" + std::to_string(row.verified) + "/" +
                               std::to_string(row.silent));
        if (row.end)
            out.durations.push_back(*row.end - row.begin);
        else
            out.rows_closed = false;
    }
    out.verify_frames = sim.stats().air_frame_count("ApInfoReqFrame") +
                        sim.stats().air_frame_count("ApInfoResFrame") +
                        sim.stats().air_frame_count("ApInfoAckFrame");
    return out;
}

// Beacon sink for the neighbor-order check.
struct BeaconListener : simnet::Agent {
    Vec2 pos{};
    std::optional<wire::Beacon> last;

    explicit BeaconListener(std::string name) : Agent(std::move(name)) {}
    Vec2 position(SimTime) const override { return pos; }
    std::optional<std::uint8_t> tuned_channel() const override { return 1; }
    std::optional<MacAddress> radio_mac() const override { return mac_of(0x99); }
    void on_wireless(Simulator&, const wire::MgmtFrame& frame, Rss) override {
        if (const auto* beacon = std::get_if<wire::Beacon>(&frame.body)) last = *beacon;
    }
};

// ---------------------------------------------------------------------------

void check_best_case_handoff() {
    auto out = harness::run_scenario(load("allon3.json"));
    auto ms = first_latency_ms(out);
    bool ok = ms && *ms >= 1.5 && *ms <= 2.5;
    report(1, "cached-list handoff completes in 2.0 ms +/- 0.5", ok,
           ms ? fmt(*ms) + " ms" : "no handoff completed");
}

void check_wrong_neighbor_penalty() {
    auto one = first_latency_ms(harness::run_scenario(load("allon3_miss1.json")));
    auto two = first_latency_ms(harness::run_scenario(load("allon3_miss2.json")));
    bool ok = one && *one >= 2.5 && *one <= 3.5 &&
              two && *two >= 3.5 && *two <= 4.5;
    report(2, "each dead cached candidate adds 1.0 ms +/- 0.5", ok,
           (one ? fmt(*one) : std::string("none")) + " ms / " +
           (two ? fmt(*two) : std::string("none")) + " ms");
}

void check_full_scan_latency() {
    auto out = harness::run_scenario(load("baseline304.json"));
    auto ms = first_latency_ms(out);
    bool ok = ms && *ms >= 300.0 && *ms <= 308.0;

    // Dwell bounds for every occupancy pattern of the 11-channel sweep: each
    // channel costs MinChannelTime when silent and MaxChannelTime when not,
    // so the exhaustive 2^11 enumeration brackets every possible scan.
    scanning::ScanConfig cfg;
    cfg.channels.resize(11);
    std::iota(cfg.channels.begin(), cfg.channels.end(), std::uint8_t{1});
    cfg.min_channel_time = SimTime::from_ms(20);
    cfg.max_channel_time = SimTime::from_ms(40);
    cfg.beacon_interval = SimTime::from_ms(100);
    cfg.channel_switch_time = SimTime{};
    SimTime lo = SimTime::from_ms(1 << 20), hi{};
    for (unsigned mask = 0; mask < (1u << 11); ++mask) {
        scanning::ScanEnvironment env;
        for (int ch = 1; ch <= 11; ++ch)
            if (mask & (1u << (ch - 1))) {
                MacAddress mac{{0x02, 0, 0, 0, 1, static_cast<std::uint8_t>(ch)}};
                env.by_channel[static_cast<std::uint8_t>(ch)].push_back(
                    {ApInfoEntry("cell", mac, mac, Ipv4{{10, 0, 1, 1}},
                                 static_cast<std::uint8_t>(ch), 100),
                     Rss::from_dbm(-60), SimTime::from_ms(1)});
            }
        auto total = scanning::run_active_scan(cfg, env).total_delay;
        lo = std::min(lo, total);
        hi = std::max(hi, total);
        int occupied = __builtin_popcount(mask);
        if (total != SimTime::from_ms(220 + 20 * occupied)) {
            report(3, "classic full scan: 304 ms +/- 4, dwell within [220, 440]",
                   false, "dwell off-formula at occupancy " + std::to_string(occupied));
            return;
        }
    }
    ok = ok && lo == SimTime::from_ms(220) && hi == SimTime::from_ms(440);
    report(3, "classic full scan: 304 ms +/- 4, dwell within [220, 440]", ok,
           (ms ? fmt(*ms) : std::string("none")) + " ms, dwell " +
           fmt(lo.us / 1000.0) + ".." + fmt(hi.us / 1000.0) + " ms");
}

void check_passive_scan_formula() {
    scanning::ScanConfig cfg;
    cfg.channels.resize(11);
    std::iota(cfg.channels.begin(), cfg.channels.end(), std::uint8_t{1});
    cfg.min_channel_time = SimTime::from_ms(20);
    cfg.max_channel_time = SimTime::from_ms(40);
    cfg.beacon_interval = SimTime::from_ms(100);
    cfg.channel_switch_time = SimTime{};
    auto eleven = scanning::passive_scan_delay(cfg);
    cfg.channels.resize(32);
    std::iota(cfg.channels.begin(), cfg.channels.end(), std::uint8_t{1});
    auto thirty_two = scanning::passive_scan_delay(cfg);
    bool ok = eleven.us == 1100000 && thirty_two.us == 3200000;
    report(4, "passive sweep: exactly 1100 ms / 3200 ms for 11 / 32 channels", ok,
           fmt(eleven.us / 1000.0) + " ms / " + fmt(thirty_two.us / 1000.0) + " ms");
}

void check_packet_loss() {
    auto sc = load("baseline304.json");
    auto cached = harness::run_scenario(sc, std::nullopt, ForceMode::NeighborCache);
    auto classic = harness::run_scenario(sc, std::nullopt, ForceMode::BaselineFullScan);
    std::int64_t cached_lost = cached.stats.traffic.at(0).lost;
    std::int64_t classic_lost = classic.stats.traffic.at(0).lost;
    bool ok = classic_lost >= 185 && classic_lost <= 195 && cached_lost <= 10 &&
              (cached_lost == 0 || classic_lost / cached_lost >= 20);
    report(5, "loss across one handoff: baseline 190 +/- 5, cached <= 10, ratio >= 20",
           ok, std::to_string(classic_lost) + " vs " + std::to_string(cached_lost));
}

void check_voting_determinism() {
    int worlds = 0;
    for (int n = 2; n <= 5; ++n) {
        std::vector<int> boots(n);
        std::iota(boots.begin(), boots.end(), 0);
        std::optional<WorldRun> reference;
        do {
            auto run = run_circle(n, boots, 30.0);
            ++worlds;
            if (!run.all_operational || !run.rows_closed) {
                report(6, "voting outcome is power-on-order invariant", false,
                       std::to_string(n) + " APs: a run did not complete");
                return;
            }
            // Sequence must visit ascending macs, which here is ap1..apN.
            for (int i = 0; i < n; ++i) {
                if (run.sequence[i].rfind("ap" + std::to_string(i + 1) + ":", 0) != 0) {
                    report(6, "voting outcome is power-on-order invariant", false,
                           "unexpected sequence " + run.sequence[i]);
                    return;
                }
            }
            if (!reference) {
                reference = run;
            } else if (run.mac_lists != reference->mac_lists ||
                       run.sequence != reference->sequence ||
                       run.neighbor_lists != reference->neighbor_lists) {
                report(6, "voting outcome is power-on-order invariant", false,
                       std::to_string(n) + " APs: permutation changed the result");
                return;
            }
        } while (std::next_permutation(boots.begin(), boots.end()));
    }
    report(6, "voting outcome is power-on-order invariant", true,
           std::to_string(worlds) + " permutations across 2..5 APs");
}

void check_mutual_exclusion() {
    const char* files[] = {"newadded.json", "two_joins.json"};
    int runs = 0;
    for (const char* file : files) {
        auto sc = load(file);
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            auto out = harness::run_scenario(sc, seed);
            ++runs;
            auto rows = out.stats.verifications;
            std::sort(rows.begin(), rows.end(),
                      [](const auto& a, const auto& b) { return a.begin < b.begin; });
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (!rows[i].end) {
                    report(7, "air verification is serialized and always completes",
                           false, std::string(file) + " seed " + std::to_string(seed) +
                                      ": unfinished verification");
                    return;
                }
                if (i > 0 && *rows[i - 1].end > rows[i].begin) {
                    report(7, "air verification is serialized and always completes",
                           false, std::string(file) + " seed " + std::to_string(seed) +
                                      ": two APs verifying at once");
                    return;
                }
            }
            for (const auto& ap : out.aps) {
                if (!ap.finished || ap.phase != "operational") {
                    report(7, "air verification is serialized and always completes",
                           false, std::string(file) + " seed " + std::to_string(seed) +
                                      ": " + ap.id + " stuck in " + ap.phase);
                    return;
                }
            }
        }
    }
    report(7, "air verification is serialized and always completes", true,
           std::to_string(runs) + " randomized runs");
}

void check_message_economy() {
    for (int n = 2; n <= 5; ++n) {
        std::vector<int> boots(n, 0);
        auto run = run_circle(n, boots, 70.0);
        std::int64_t expected = 3 * n * (n - 1) / 2;
        if (!run.all_operational || run.verify_frames != expected) {
            report(8, "full mesh verifies with 3*N*(N-1)/2 frames, shrinking passes",
                   false, std::to_string(n) + " APs: " +
                              std::to_string(run.verify_frames) + " frames, expected " +
                              std::to_string(expected));
            return;
        }
        for (std::size_t i = 1; i < run.durations.size(); ++i) {
            if (run.durations[i] > run.durations[i - 1]) {
                report(8, "full mesh verifies with 3*N*(N-1)/2 frames, shrinking passes",
                       false, std::to_string(n) + " APs: pass " + std::to_string(i) +
                                  " outlasted its predecessor");
                return;
            }
        }
    }
    report(8, "full mesh verifies with 3*N*(N-1)/2 frames, shrinking passes", true,
           "3, 9, 18, 30 frames for 2..5 APs");
}

void check_beacon_neighbor_order() {
    ApAgent ap1("ap1", ap_config(1, 1, {0, 0}));
    ApAgent ap3("ap3", ap_config(3, 11, {75, 130}));  // about 150 m out
    ApAgent ap4("ap4", ap_config(4, 6, {50, 0}));     // 50 m out, stronger
    BeaconListener ear("ear");
    ear.pos = {10, 0};
    Simulator sim(RadioModel{}, LinkConfig{});
    sim.add_agent(ear, SimTime{});
    sim.add_agent(ap1, SimTime{});
    sim.add_agent(ap3, SimTime{});
    sim.add_agent(ap4, SimTime{});
    sim.run_until(SimTime::from_ms(400));

    bool ok = ear.last && ear.last->ap.mac == mac_of(1) &&
              ear.last->neighbor_list.size() == 2 &&
              ear.last->neighbor_list[0].mac == mac_of(4) &&
              ear.last->neighbor_list[1].mac == mac_of(3) &&
              ear.last->neighbor_list[0].rss > ear.last->neighbor_list[1].rss;
    std::string detail = "no beacon heard";
    if (ear.last && ear.last->neighbor_list.size() == 2)
        detail = ear.last->neighbor_list[0].rss->to_string() + " dBm before " +
                 ear.last->neighbor_list[1].rss->to_string() + " dBm";
    report(9, "beacons list the stronger verified neighbor first", ok, detail);
}

void check_wire_roundtrip() {
    std::mt19937_64 rng(20260817);
    auto rand_mac = [&] {
        MacAddress m{};
        for (auto& b : m.bytes) b = static_cast<std::uint8_t>(rng());
        return m;
    };
    auto rand_ip = [&] {
        Ipv4 ip{};
        for (auto& b : ip.octets) b = static_cast<std::uint8_t>(rng());
        return ip;
    };
    auto rand_entry = [&] {
        std::string ssid(rng() % 33, 'x');
        for (auto& c : ssid) c = static_cast<char>('a' + rng() % 26);
        ApInfoEntry e(ssid, rand_mac(), rand_mac(), rand_ip(),
                      static_cast<std::uint8_t>(1 + rng() % 32),
                      static_cast<std::uint16_t>(1 + rng() % 65535), rng() % 2,
                      rng() % 2 ? std::optional<Rss>(Rss{static_cast<std::int16_t>(
                                      -40 - static_cast<int>(rng() % 120))})
                                : std::nullopt);
        return e;
    };

    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        wire::IappPacket p;
        p.src_ip = rand_ip();
        p.dst_ip = rand_ip();
        switch (rng() % 5) {
            case 0: p.body = wire::ApInfoReq{rand_entry()}; break;
            case 1:
                p.body = wire::ApInfoRes{rand_entry(), rng() % 2 == 0, rng() % 2 == 0};
                break;
            case 2: p.body = wire::Permission{rng() % 2 == 0}; break;
            case 3: p.body = wire::NewNeighbourReq{rand_entry()}; break;
            default: p.body = wire::NewNeighbourRes{rand_entry()}; break;
        }
        auto decoded = wire::decode_iapp(wire::encode_iapp(p));
        if (!decoded || decoded.value() != p) {
            report(10, "wire codecs roundtrip; reserved commands never decode", false,
                   "packet roundtrip broke at trial " + std::to_string(trial));
            return;
        }
        ++checked;
    }
    for (int trial = 0; trial < 400; ++trial) {
        wire::MgmtFrame f;
        f.src_mac = rand_mac();
        f.dst_mac = rand_mac();
        f.channel = static_cast<std::uint8_t>(1 + rng() % 32);
        switch (rng() % 11) {
            case 0: f.body = wire::ApInfoReqFrame{rand_entry()}; break;
            case 1:
                f.body = wire::ApInfoResFrame{rand_entry(), Rss{-120}};
                break;
            case 2: f.body = wire::ApInfoAckFrame{rand_entry(), Rss{-100}}; break;
            case 3: f.body = wire::ApInfoUpdateFrame{rand_entry()}; break;
            case 4: {
                std::vector<ApInfoEntry> neighbors;
                int k = static_cast<int>(rng() % 4);
                for (int i = 0; i < k; ++i) {
                    auto e = rand_entry();
                    e.real_neighbor = true;
                    e.rss = Rss{static_cast<std::int16_t>(-80 - 2 * i)};
                    neighbors.push_back(e);
                }
                f.body = wire::Beacon(rand_entry(), neighbors);
                break;
            }
            case 5: f.body = wire::ProbeReq{}; break;
            case 6: f.body = wire::ProbeRes{rand_entry()}; break;
            case 7: f.body = wire::AuthReq{rand_mac()}; break;
            case 8: f.body = wire::AuthRes{rng() % 2 == 0}; break;
            case 9: f.body = wire::AssocReq{rand_mac()}; break;
            default: f.body = wire::AssocRes{rng() % 2 == 0}; break;
        }
        auto decoded = wire::decode_frame(wire::encode_frame(f));
        if (!decoded || decoded.value() != f) {
            report(10, "wire codecs roundtrip; reserved commands never decode", false,
                   "frame roundtrip broke at trial " + std::to_string(trial));
            return;
        }
        ++checked;
    }

    // Reserved and unknown command numbers, over assorted payload tails.
    for (int command = 0; command < 256; ++command) {
        if (command >= 7 && command <= 11) continue;
        for (std::size_t tail : {std::size_t{0}, std::size_t{8}, std::size_t{40}}) {
            std::vector<std::uint8_t> bytes(1 + tail);
            bytes[0] = static_cast<std::uint8_t>(command);
            for (std::size_t i = 1; i < bytes.size(); ++i)
                bytes[i] = static_cast<std::uint8_t>(rng());
            auto decoded = wire::decode_iapp(bytes);
            bool rejected =
                !decoded &&
                decoded.error().kind == (command < 7
                                             ? wire::DecodeErrorKind::reserved_command
                                             : wire::DecodeErrorKind::unknown_command);
            if (!rejected) {
                report(10, "wire codecs roundtrip; reserved commands never decode",
                       false, "command " + std::to_string(command) + " slipped through");
                return;
            }
            ++checked;
        }
    }

    // No strict prefix of a valid encoding may decode.
    wire::IappPacket sample;
    sample.src_ip = rand_ip();
    sample.dst_ip = rand_ip();
    sample.body = wire::ApInfoRes{rand_entry(), true, false};
    auto bytes = wire::encode_iapp(sample);
    for (std::size_t len = 0; len < bytes.size(); ++len) {
        if (wire::decode_iapp({bytes.data(), len})) {
            report(10, "wire codecs roundtrip; reserved commands never decode", false,
                   "truncated packet decoded at length " + std::to_string(len));
            return;
        }
        ++checked;
    }
    report(10, "wire codecs roundtrip; reserved commands never decode", true,
           std::to_string(checked) + " cases");
}

void check_replay_determinism() {
    const char* files[] = {"allon3.json",        "allon3_miss1.json",
                           "allon3_miss2.json",  "baseline304.json",
                           "newadded.json",      "two_joins.json",
                           "esscross.json"};
    for (const char* file : files) {
        auto sc = load(file);
        auto a = harness::run_scenario(sc);
        auto b = harness::run_scenario(sc);
        std::ostringstream csv_a, csv_b;
        harness::write_csv(csv_a, {a});
        harness::write_csv(csv_b, {b});
        if (a.event_log != b.event_log || csv_a.str() != csv_b.str()) {
            report(11, "same seed, same bytes: event log and CSV replay identically",
                   false, std::string(file) + " diverged");
            return;
        }
    }
    report(11, "same seed, same bytes: event log and CSV replay identically", true,
           "7 scenarios, two runs each");
}

}  // namespace

int main() {
    check_best_case_handoff();
    check_wrong_neighbor_penalty();
    check_full_scan_latency();
    check_passive_scan_formula();
    check_packet_loss();
    check_voting_determinism();
    check_mutual_exclusion();
    check_message_economy();
    check_beacon_neighbor_order();
    check_wire_roundtrip();
    check_replay_determinism();

    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria satisfied\n";
    return 0;
}
