#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <string>
#include <vector>

#include "andwc/simnet/simulator.hpp"

using namespace andwc::simnet;
using andwc::wire::ApInfoEntry;
using andwc::wire::AuthRes;
using andwc::wire::IappPacket;
using andwc::wire::Ipv4;
using andwc::wire::MacAddress;
using andwc::wire::MgmtFrame;
using andwc::wire::Permission;
using andwc::wire::Rss;

namespace {

// A fully scripted node: fixed position, fixed tuning, and hook functions, so
// each test drives the engine without any protocol logic in the way.
struct TestNode : Agent {
    Vec2 pos{};
    std::optional<std::uint8_t> channel;
    std::optional<MacAddress> mac;
    std::optional<Ipv4> ip;
    std::optional<std::string> segment;
    bool ready = false;

    std::vector<std::string> received;  // event names in arrival order
    std::function<void(Simulator&)> on_up;
    std::function<void(Simulator&, std::uint64_t)> on_tick;

    explicit TestNode(std::string name) : Agent(std::move(name)) {}

    Vec2 position(SimTime) const override { return pos; }
    std::optional<std::uint8_t> tuned_channel() const override { return channel; }
    std::optional<MacAddress> radio_mac() const override { return mac; }
    std::optional<Ipv4> lan_ip() const override { return ip; }
    std::optional<std::string> lan_segment() const override { return segment; }
    bool traffic_ready() const override { return ready; }

    void on_power_on(Simulator& sim) override {
        if (on_up) on_up(sim);
    }
    void on_wireless(Simulator&, const MgmtFrame& frame, Rss) override {
        received.push_back(std::string("air:") + frame_name(frame.body));
    }
    void on_lan(Simulator&, const IappPacket& packet) override {
        received.push_back(std::string("lan:") + iapp_name(packet.body));
    }
    void on_timer(Simulator& sim, std::uint64_t cookie) override {
        received.push_back("timer:" + std::to_string(cookie));
        if (on_tick) on_tick(sim, cookie);
    }
    void on_tx_confirm(Simulator&, std::uint64_t cookie) override {
        received.push_back("confirm:" + std::to_string(cookie));
    }
};

MacAddress mac_of(std::uint8_t tag) { return MacAddress{{0x02, 0, 0, 0, 0, tag}}; }
Ipv4 ip_of(std::uint8_t tag) { return Ipv4{{10, 0, 0, tag}}; }

ApInfoEntry entry_of(std::uint8_t tag, std::uint8_t channel) {
    return ApInfoEntry("net", mac_of(tag), mac_of(tag), ip_of(tag), channel, 100);
}

MgmtFrame frame_to(std::uint8_t from, std::uint8_t to, std::uint8_t channel) {
    return MgmtFrame{mac_of(from), mac_of(to), channel, AuthRes{true}};
}

}  // namespace

TEST_CASE("path loss falls strictly with distance beyond one meter") {
    RadioModel radio;
    CHECK(radio.rss_dbm(1.0) == doctest::Approx(-20.0));
    CHECK(radio.rss_dbm(10.0) == doctest::Approx(-50.0));
    CHECK(radio.rss_dbm(100.0) == doctest::Approx(-80.0));
    CHECK(radio.rss_dbm(0.3) == radio.rss_dbm(1.0));  // clamped below 1 m
    for (double d = 1.0; d < 400.0; d += 0.7)
        CHECK(radio.rss_dbm(d) > radio.rss_dbm(d + 0.7));
    CHECK(radio.range_m() == doctest::Approx(215.443469));
    CHECK(radio.deliverable(-90.0));
    CHECK(!radio.deliverable(-90.0001));
    // The engine quantizes to the half-dB grid on delivery.
    CHECK(Rss::from_dbm(radio.rss_dbm(150.0)) == Rss{-171});  // -85.5
}

TEST_CASE("wired delivery is lossless and keeps send order") {
    TestNode a("a"), b("b");
    a.segment = b.segment = "lan0";
    a.ip = ip_of(1);
    b.ip = ip_of(2);
    a.on_up = [&](Simulator& sim) {
        sim.send_lan(a, {ip_of(1), ip_of(2), andwc::wire::ApInfoReq{entry_of(1, 1)}});
        sim.send_lan(a, {ip_of(1), ip_of(2), Permission{true}});
        sim.send_lan(a, {ip_of(1), ip_of(2), andwc::wire::NewNeighbourRes{entry_of(1, 1)}});
    };
    Simulator sim(RadioModel{}, LinkConfig{});
    sim.add_agent(a, SimTime{});
    sim.add_agent(b, SimTime{});
    sim.run_until(SimTime::from_ms(10));
    CHECK(b.received == std::vector<std::string>{
        "lan:ApInfoReq", "lan:Permission", "lan:NewNeighbourRes"});
    CHECK(sim.stats().lan_packets.at("Permission") == 1);
}

TEST_CASE("same-instant events fire in scheduling order") {
    TestNode a("a"), b("b");
    a.segment = b.segment = "lan0";
    a.ip = ip_of(1);
    b.ip = ip_of(2);
    // b arms a timer for t+200us first; a's packet arrives at the same instant
    // but is scheduled later, so the timer wins the tie.
    b.on_up = [&](Simulator& sim) { sim.schedule_timer(b, sim.links().lan_latency, 7); };
    a.on_up = [&](Simulator& sim) {
        sim.send_lan(a, {ip_of(1), ip_of(2), Permission{false}});
    };
    Simulator sim(RadioModel{}, LinkConfig{});
    sim.add_agent(b, SimTime{});  // powered first, so its timer is scheduled first
    sim.add_agent(a, SimTime{});
    sim.run_until(SimTime::from_ms(1));
    CHECK(b.received == std::vector<std::string>{"timer:7", "lan:Permission"});
}

TEST_CASE("wireless frames reach only tuned, addressed, in-range receivers") {
    TestNode tx("tx"), near("near"), wrong_channel("wrongch"), far("far"), other("other");
    tx.channel = 6;
    tx.mac = mac_of(1);
    near.channel = 6;
    near.mac = mac_of(2);
    near.pos = {50, 0};
    wrong_channel.channel = 1;
    wrong_channel.mac = mac_of(3);
    far.channel = 6;
    far.mac = mac_of(4);
    far.pos = {400, 0};  // beyond the delivery cutoff
    other.channel = 6;
    other.mac = mac_of(5);
    other.pos = {10, 0};

    tx.on_up = [&](Simulator& sim) {
        sim.send_air(tx, frame_to(1, 2, 6));                        // unicast to near
        sim.send_air(tx, {mac_of(1), MacAddress::broadcast(), 6,    // broadcast
                          andwc::wire::ProbeReq{}});
    };
    Simulator sim(RadioModel{}, LinkConfig{});
    // Receivers must already be powered when the frame leaves the antenna,
    // so the transmitter boots last.
    sim.add_agent(near, SimTime{});
    sim.add_agent(wrong_channel, SimTime{});
    sim.add_agent(far, SimTime{});
    sim.add_agent(other, SimTime{});
    sim.add_agent(tx, SimTime::from_ms(1));
    sim.run_until(SimTime::from_ms(2));

    CHECK(near.received == std::vector<std::string>{"air:AuthRes", "air:ProbeReq"});
    CHECK(other.received == std::vector<std::string>{"air:ProbeReq"});
    CHECK(wrong_channel.received.empty());
    CHECK(far.received.empty());
    CHECK(sim.stats().air_frame_count("AuthRes") == 1);
    CHECK(sim.stats().air_frame_count("ProbeReq") == 1);
}

TEST_CASE("a transmit confirm arrives one round trip later, only if someone heard") {
    TestNode tx("tx"), rx("rx"), lonely("lonely");
    tx.channel = rx.channel = 6;
    tx.mac = mac_of(1);
    rx.mac = mac_of(2);
    rx.pos = {30, 0};
    lonely.channel = 11;
    lonely.mac = mac_of(9);

    tx.on_up = [&](Simulator& sim) {
        sim.send_air(tx, frame_to(1, 2, 6), true, 42);
    };
    lonely.on_up = [&](Simulator& sim) {
        sim.send_air(lonely, frame_to(9, 8, 11), true, 43);  // nobody on channel 11
    };
    Simulator sim(RadioModel{}, LinkConfig{});
    sim.add_agent(rx, SimTime{});
    sim.add_agent(tx, SimTime::from_ms(1));
    sim.add_agent(lonely, SimTime::from_ms(1));
    sim.run_until(SimTime::from_ms(5));

    CHECK(tx.received == std::vector<std::string>{"confirm:42"});
    CHECK(lonely.received.empty());
    CHECK(rx.received == std::vector<std::string>{"air:AuthRes"});
}

TEST_CASE("a receiver that powers off in flight never sees the frame") {
    TestNode tx("tx"), rx("rx");
    tx.channel = rx.channel = 6;
    tx.mac = mac_of(1);
    rx.mac = mac_of(2);
    rx.pos = {30, 0};
    tx.on_up = [&](Simulator& sim) {
        sim.schedule_timer(tx, SimTime::from_ms(5), 1);
    };
    tx.on_tick = [&](Simulator& sim, std::uint64_t) {
        sim.send_air(tx, frame_to(1, 2, 6));
    };
    Simulator sim(RadioModel{}, LinkConfig{});
    sim.add_agent(tx, SimTime{});
    // Off at 5.05 ms, while the 5.0 ms transmission is still in the air.
    sim.add_agent(rx, SimTime{}, SimTime::from_us(5050));
    sim.run_until(SimTime::from_ms(10));
    CHECK(rx.received.empty());

    // The frame was transmitted and counted regardless.
    CHECK(sim.stats().air_frame_count("AuthRes") == 1);
}

TEST_CASE("timers die with the agent") {
    TestNode node("node");
    node.on_up = [&](Simulator& sim) { sim.schedule_timer(node, SimTime::from_ms(10), 5); };
    Simulator sim(RadioModel{}, LinkConfig{});
    sim.add_agent(node, SimTime{}, SimTime::from_ms(5));  // off before the timer fires
    sim.run_until(SimTime::from_ms(20));
    CHECK(node.received.empty());
}

TEST_CASE("multicast stays on its wired segment, unicast routes across") {
    TestNode a("a"), b("b"), c("c");
    a.segment = "lan0";
    a.ip = ip_of(1);
    b.segment = "lan0";
    b.ip = ip_of(2);
    c.segment = "lan1";
    c.ip = ip_of(3);
    a.on_up = [&](Simulator& sim) {
        sim.send_lan(a, {ip_of(1), Ipv4::iapp_multicast(), Permission{true}});
        sim.send_lan(a, {ip_of(1), ip_of(3), Permission{false}});   // cross-segment
        sim.send_lan(a, {ip_of(1), ip_of(99), Permission{false}});  // nobody
    };
    Simulator sim(RadioModel{}, LinkConfig{});
    sim.add_agent(b, SimTime{});
    sim.add_agent(c, SimTime{});
    sim.add_agent(a, SimTime::from_ms(1));  // multicast only reaches powered peers
    sim.run_until(SimTime::from_ms(2));
    CHECK(b.received == std::vector<std::string>{"lan:Permission"});
    CHECK(c.received == std::vector<std::string>{"lan:Permission"});
    CHECK(sim.event_log().find("unknown address 10.0.0.99") != std::string::npos);
}

TEST_CASE("payload packets are lost exactly while the receiver is not ready") {
    TestNode station("ms0");
    station.on_up = [&](Simulator& sim) {
        station.ready = true;
        // Window boundaries sit off the tick grid so the count is unambiguous.
        sim.schedule_timer(station, SimTime::from_us(1000300), 1);   // close
        sim.schedule_timer(station, SimTime::from_us(1304700), 2);   // reopen
    };
    station.on_tick = [&](Simulator&, std::uint64_t cookie) {
        station.ready = cookie == 2;
    };
    Simulator sim(RadioModel{}, LinkConfig{});
    auto id = sim.add_agent(station, SimTime{});
    sim.add_traffic({"stream0", id, SimTime::from_ms(100), SimTime::from_us(1600), 1000});
    sim.run_until(SimTime::from_ms(3000));

    // Ticks fall at 100 + 1.6k ms; 1000.3 <= t < 1304.7 covers k = 563..752.
    const auto& t = sim.stats().traffic.at(0);
    CHECK(t.sent == 1000);
    CHECK(t.lost == 190);
    CHECK(t.delivered == 810);
}

TEST_CASE("identical setups replay identical logs") {
    auto run = [](std::string* log_out, std::map<std::string, std::int64_t>* frames) {
        TestNode beacon("ap"), listener("ms");
        beacon.channel = listener.channel = 6;
        beacon.mac = mac_of(1);
        listener.mac = mac_of(2);
        listener.pos = {40, 0};
        beacon.on_up = [&](Simulator& sim) { sim.schedule_timer(beacon, SimTime{}, 1); };
        beacon.on_tick = [&](Simulator& sim, std::uint64_t) {
            sim.send_air(beacon, {mac_of(1), MacAddress::broadcast(), 6,
                                  andwc::wire::ProbeRes{entry_of(1, 6)}});
            sim.schedule_timer(beacon, SimTime::from_ms(10), 1);
        };
        Simulator sim(RadioModel{}, LinkConfig{});
        sim.add_agent(beacon, SimTime{});
        auto id = sim.add_agent(listener, SimTime::from_ms(3));
        sim.add_traffic({"t", id, SimTime::from_ms(1), SimTime::from_ms(7), 50});
        sim.run_until(SimTime::from_ms(500));
        *log_out = sim.event_log();
        *frames = sim.stats().air_frames;
    };
    std::string log1, log2;
    std::map<std::string, std::int64_t> f1, f2;
    run(&log1, &f1);
    run(&log2, &f2);
    CHECK(log1 == log2);
    CHECK(f1 == f2);
    CHECK(!log1.empty());
}

TEST_CASE("misuse of the engine is rejected loudly") {
    TestNode node("node");
    Simulator sim(RadioModel{}, LinkConfig{});
    sim.add_agent(node, SimTime{});

    // Sending while powered off is a programming error, not a silent drop.
    CHECK_THROWS_AS(sim.send_air(node, frame_to(1, 2, 6)), std::logic_error);
    CHECK_THROWS_AS(sim.send_lan(node, {ip_of(1), ip_of(2), Permission{true}}),
                    std::logic_error);

    // Scheduling into the past breaks determinism and must throw.
    node.on_up = [&](Simulator& s) { s.schedule_timer(node, SimTime::from_ms(5), 1); };
    node.on_tick = [&](Simulator& s, std::uint64_t) {
        s.schedule_timer(node, SimTime::from_us(-1), 2);
    };
    CHECK_THROWS_AS(sim.run_until(SimTime::from_ms(10)), std::logic_error);

    TestNode wired("wired");
    Simulator sim2(RadioModel{}, LinkConfig{});
    sim2.add_agent(wired, SimTime{});
    sim2.run_until(SimTime::from_ms(1));
    // No segment configured: the engine refuses to guess.
    CHECK_THROWS_AS(sim2.send_lan(wired, {ip_of(1), ip_of(2), Permission{true}}),
                    std::logic_error);

    TestNode late("late");
    Simulator sim3(RadioModel{}, LinkConfig{});
    CHECK_THROWS_AS(sim3.add_agent(late, SimTime::from_ms(5), SimTime::from_ms(5)),
                    std::invalid_argument);
}
