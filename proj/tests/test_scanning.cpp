#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "andwc/scanning/scan.hpp"

using namespace andwc::scanning;
using andwc::simnet::SimTime;
using andwc::wire::ApInfoEntry;
using andwc::wire::Ipv4;
using andwc::wire::MacAddress;
using andwc::wire::Rss;

namespace {

ScanConfig config_bg11() {
    ScanConfig cfg;
    cfg.channels.resize(11);
    std::iota(cfg.channels.begin(), cfg.channels.end(), std::uint8_t{1});
    cfg.min_channel_time = SimTime::from_ms(20);
    cfg.max_channel_time = SimTime::from_ms(40);
    cfg.beacon_interval = SimTime::from_ms(100);
    cfg.channel_switch_time = SimTime::from_us(0);
    return cfg;
}

ScanConfig config_a32() {
    auto cfg = config_bg11();
    cfg.channels.resize(32);
    std::iota(cfg.channels.begin(), cfg.channels.end(), std::uint8_t{1});
    return cfg;
}

ApInfoEntry ap_on(std::uint8_t channel, std::uint8_t tag) {
    MacAddress mac{{0x02, 0, 0, 0, channel, tag}};
    Ipv4 ip{{10, 0, channel, tag}};
    return ApInfoEntry("cell", mac, mac, ip, channel, 100);
}

ScanResponder responder(std::uint8_t channel, std::uint8_t tag, double rss_dbm,
                        double latency_ms) {
    return {ap_on(channel, tag), Rss::from_dbm(rss_dbm), SimTime::from_ms(latency_ms)};
}

// Reference model, written from the stated rules rather than the library
// code: per channel, any response strictly before MinChannelTime commits the
// scanner to MaxChannelTime, otherwise it leaves at MinChannelTime; a
// response is recorded iff it lands strictly inside the dwell.
SimTime oracle_total(const ScanConfig& cfg, const ScanEnvironment& env,
                     int* hit_count = nullptr) {
    SimTime total{0};
    int hits = 0;
    for (auto ch : cfg.channels) {
        total += cfg.channel_switch_time;
        bool occupied = false;
        auto it = env.by_channel.find(ch);
        if (it != env.by_channel.end())
            for (const auto& r : it->second)
                if (r.latency < cfg.min_channel_time) occupied = true;
        SimTime dwell = occupied ? cfg.max_channel_time : cfg.min_channel_time;
        total += dwell;
        if (it != env.by_channel.end())
            for (const auto& r : it->second)
                if (r.latency < dwell) ++hits;
    }
    if (hit_count) *hit_count = hits;
    return total;
}

}  // namespace

TEST_CASE("passive sweep time is channel count times the beacon interval") {
    CHECK(passive_scan_delay(config_bg11()).us == 1100000);
    CHECK(passive_scan_delay(config_a32()).us == 3200000);

    auto cfg = config_bg11();
    cfg.channel_switch_time = SimTime::from_ms(5);
    CHECK(passive_scan_delay(cfg).us == 1155000);

    cfg.beacon_interval = SimTime::from_ms(200);
    cfg.channel_switch_time = SimTime::from_us(0);
    CHECK(passive_scan_delay(cfg).us == 2200000);
}

TEST_CASE("config validation rejects out-of-domain settings") {
    auto cfg = config_bg11();
    cfg.channels.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = config_bg11();
    cfg.channels.push_back(33);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = config_bg11();
    cfg.max_channel_time = SimTime::from_ms(10);  // below min
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = config_bg11();
    cfg.channel_switch_time = SimTime::from_us(-1);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("a quiet channel costs MinChannelTime, an occupied one MaxChannelTime") {
    auto cfg = config_bg11();
    CHECK(active_channel_dwell(cfg, 0) == cfg.min_channel_time);
    CHECK(active_channel_dwell(cfg, 1) == cfg.max_channel_time);
    CHECK(active_channel_dwell(cfg, 5) == cfg.max_channel_time);
}

TEST_CASE("a response landing exactly at MinChannelTime does not hold the scanner") {
    auto cfg = config_bg11();
    ScanEnvironment env;
    env.by_channel[3] = {responder(3, 1, -60, 20.0)};  // exactly at the give-up point

    auto result = run_active_scan(cfg, env);
    CHECK(result.dwell[2] == cfg.min_channel_time);
    CHECK(result.hits.empty());  // it also arrives too late to be recorded

    // One microsecond earlier and the channel is occupied.
    env.by_channel[3] = {{ap_on(3, 1), Rss::from_dbm(-60), SimTime::from_us(19999)}};
    result = run_active_scan(cfg, env);
    CHECK(result.dwell[2] == cfg.max_channel_time);
    REQUIRE(result.hits.size() == 1);
    CHECK(result.hits[0].channel == 3);
}

TEST_CASE("late responders are recorded only while the scanner is still dwelling") {
    auto cfg = config_bg11();
    ScanEnvironment env;
    env.by_channel[5] = {
        responder(5, 1, -70, 1.0),    // commits the channel to the full dwell
        responder(5, 2, -65, 30.0),   // inside the extended dwell
        responder(5, 3, -50, 40.0),   // exactly at the end: missed
    };
    auto result = run_active_scan(cfg, env);
    CHECK(result.dwell[4] == cfg.max_channel_time);
    REQUIRE(result.hits.size() == 2);
    CHECK(result.hits[0].ap.mac.bytes[5] == 1);
    CHECK(result.hits[1].ap.mac.bytes[5] == 2);

    // Without the early responder the 30 ms answer goes unheard too.
    env.by_channel[5] = {responder(5, 2, -65, 30.0)};
    result = run_active_scan(cfg, env);
    CHECK(result.dwell[4] == cfg.min_channel_time);
    CHECK(result.hits.empty());
}

TEST_CASE("sweep cost is bounded by the all-quiet and all-occupied extremes") {
    auto cfg = config_bg11();
    const SimTime lo = SimTime::from_ms(220);
    const SimTime hi = SimTime::from_ms(440);

    for (int k = 0; k <= 11; ++k) {
        ScanEnvironment env;
        for (int c = 1; c <= k; ++c)
            env.by_channel[static_cast<std::uint8_t>(c)] = {
                responder(static_cast<std::uint8_t>(c), 1, -70, 0.5)};
        auto result = run_active_scan(cfg, env);
        CHECK(result.total_delay == SimTime::from_ms(220 + 20 * k));
        CHECK(result.total_delay >= lo);
        CHECK(result.total_delay <= hi);
        CHECK(result.probes_sent == 11);
    }

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        ScanEnvironment env;
        for (int c = 1; c <= 11; ++c) {
            int n = static_cast<int>(rng() % 3);
            for (int i = 0; i < n; ++i)
                env.by_channel[static_cast<std::uint8_t>(c)].push_back(
                    responder(static_cast<std::uint8_t>(c),
                              static_cast<std::uint8_t>(i + 1),
                              -90.0 + static_cast<double>(rng() % 60),
                              static_cast<double>(rng() % 50000) / 1000.0));
        }
        int oracle_hits = 0;
        auto expected = oracle_total(cfg, env, &oracle_hits);
        auto result = run_active_scan(cfg, env);
        CHECK(result.total_delay == expected);
        CHECK(static_cast<int>(result.hits.size()) == oracle_hits);
        CHECK(result.total_delay >= lo);
        CHECK(result.total_delay <= hi);
    }
}

TEST_CASE("selection prefers the strongest signal and breaks ties downward") {
    std::vector<ScanHit> hits = {
        {ap_on(1, 9), Rss::from_dbm(-70.0), 1},
        {ap_on(2, 3), Rss::from_dbm(-65.0), 2},
        {ap_on(3, 5), Rss::from_dbm(-65.0), 3},
    };
    auto best = select_best(hits, std::nullopt, 0.0);
    REQUIRE(best.has_value());
    CHECK(best->ap.mac == ap_on(2, 3).mac);  // tie at -65, lowest mac wins

    CHECK(!select_best({}, std::nullopt, 0.0).has_value());
}

TEST_CASE("the hysteresis bar must be strictly cleared") {
    std::vector<ScanHit> hits = {{ap_on(4, 1), Rss::from_dbm(-75.0), 4}};
    auto current = Rss::from_dbm(-80.0);

    // -75 is exactly 5 dB better: not convincing.
    CHECK(!select_best(hits, current, 5.0).has_value());

    hits[0].rss = Rss::from_dbm(-74.5);
    auto best = select_best(hits, current, 5.0);
    REQUIRE(best.has_value());
    CHECK(best->rss == Rss::from_dbm(-74.5));

    // Zero hysteresis still requires strict improvement.
    hits[0].rss = Rss::from_dbm(-80.0);
    CHECK(!select_best(hits, current, 0.0).has_value());
    hits[0].rss = Rss::from_dbm(-79.5);
    CHECK(select_best(hits, current, 0.0).has_value());

    // Without a current link the bar does not apply at all.
    hits[0].rss = Rss::from_dbm(-89.0);
    CHECK(select_best(hits, std::nullopt, 5.0).has_value());
}

TEST_CASE("selection agrees with a brute-force reference on random inputs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<ScanHit> hits;
        int n = static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) {
            auto hit = ScanHit{ap_on(static_cast<std::uint8_t>(1 + rng() % 11),
                                     static_cast<std::uint8_t>(rng() % 4)),
                               Rss{static_cast<std::int16_t>(
                                   -200 + static_cast<int>(rng() % 100))},
                               1};
            hits.push_back(hit);
        }
        std::optional<Rss> current;
        if (rng() % 2) current = Rss{static_cast<std::int16_t>(-200 + static_cast<int>(rng() % 100))};
        double h = static_cast<double>(rng() % 21) / 2.0;  // 0 .. 10 dB

        const ScanHit* expect = nullptr;
        for (const auto& hit : hits) {
            if (current && hit.rss.half_db - current->half_db <= std::llround(h * 2.0))
                continue;
            if (!expect || hit.rss.half_db > expect->rss.half_db ||
                (hit.rss.half_db == expect->rss.half_db && hit.ap.mac < expect->ap.mac))
                expect = &hit;
        }
        auto got = select_best(hits, current, h);
        if (!expect) {
            CHECK(!got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(got->ap.mac == expect->ap.mac);
            CHECK(got->rss == expect->rss);
        }
    }
}
