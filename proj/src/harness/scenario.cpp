#include "andwc/harness/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace andwc::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void expect_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) {
            return item.key() == k;
        });
        if (!known) fail(path, "unknown key \"" + item.key() + "\"");
    }
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::int64_t as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        fail(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

SimTime as_ms(const json& j, const std::string& path) {
    return SimTime::from_ms(as_number(j, path));
}

simnet::Vec2 as_vec2(const json& j, const std::string& path) {
    expect_array(j, path);
    if (j.size() != 2) fail(path, "expected [x, y]");
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

wire::MacAddress as_mac(const json& j, const std::string& path) {
    auto text = as_string(j, path);
    try {
        return wire::MacAddress::parse(text);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

wire::Ipv4 as_ip(const json& j, const std::string& path) {
    auto text = as_string(j, path);
    try {
        return wire::Ipv4::parse(text);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

// Returns nullptr when absent.
const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

SimTime positive_ms(const json& j, const std::string& path) {
    auto t = as_ms(j, path);
    if (t.us <= 0) fail(path, "must be positive");
    return t;
}

SimTime nonneg_ms(const json& j, const std::string& path) {
    auto t = as_ms(j, path);
    if (t.us < 0) fail(path, "must not be negative");
    return t;
}

Bounds parse_bounds(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path, {"min", "max"});
    Bounds b;
    if (auto* v = find(j, "min")) b.min = as_number(*v, path + ".min");
    if (auto* v = find(j, "max")) b.max = as_number(*v, path + ".max");
    if (!b.min && !b.max) fail(path, "needs min or max");
    if (b.min && b.max && *b.min > *b.max) fail(path, "min exceeds max");
    return b;
}

void parse_timing(const json& j, const std::string& path, TimingSpec& t) {
    expect_object(j, path);
    check_keys(j, path,
               {"beacon_interval_ms", "min_channel_time_ms", "max_channel_time_ms",
                "channel_switch_time_ms", "collection_window_ms",
                "air_verify_timeout_ms", "auth_service_delay_ms",
                "assoc_service_delay_ms", "probe_response_latency_ms",
                "auth_req_timeout_ms", "auth_response_deadline_ms",
                "rescan_backoff_ms", "hysteresis_db"});
    if (auto* v = find(j, "beacon_interval_ms"))
        t.beacon_interval = positive_ms(*v, path + ".beacon_interval_ms");
    if (auto* v = find(j, "min_channel_time_ms"))
        t.min_channel_time = positive_ms(*v, path + ".min_channel_time_ms");
    if (auto* v = find(j, "max_channel_time_ms"))
        t.max_channel_time = positive_ms(*v, path + ".max_channel_time_ms");
    if (auto* v = find(j, "channel_switch_time_ms"))
        t.channel_switch_time = nonneg_ms(*v, path + ".channel_switch_time_ms");
    if (auto* v = find(j, "collection_window_ms"))
        t.collection_window = positive_ms(*v, path + ".collection_window_ms");
    if (auto* v = find(j, "air_verify_timeout_ms"))
        t.air_verify_timeout = positive_ms(*v, path + ".air_verify_timeout_ms");
    if (auto* v = find(j, "auth_service_delay_ms"))
        t.auth_service_delay = positive_ms(*v, path + ".auth_service_delay_ms");
    if (auto* v = find(j, "assoc_service_delay_ms"))
        t.assoc_service_delay = positive_ms(*v, path + ".assoc_service_delay_ms");
    if (auto* v = find(j, "probe_response_latency_ms"))
        t.probe_response_latency = positive_ms(*v, path + ".probe_response_latency_ms");
    if (auto* v = find(j, "auth_req_timeout_ms"))
        t.auth_req_timeout = positive_ms(*v, path + ".auth_req_timeout_ms");
    if (auto* v = find(j, "auth_response_deadline_ms"))
        t.auth_response_deadline = positive_ms(*v, path + ".auth_response_deadline_ms");
    if (auto* v = find(j, "rescan_backoff_ms"))
        t.rescan_backoff = positive_ms(*v, path + ".rescan_backoff_ms");
    if (auto* v = find(j, "hysteresis_db")) {
        t.hysteresis_db = as_number(*v, path + ".hysteresis_db");
        if (t.hysteresis_db < 0) fail(path + ".hysteresis_db", "must not be negative");
    }
    if (t.min_channel_time > t.max_channel_time)
        fail(path, "min_channel_time_ms exceeds max_channel_time_ms");
    if (t.beacon_interval.us % 1000 != 0 || t.beacon_interval.us > 65535000)
        fail(path + ".beacon_interval_ms", "must be a whole number of ms up to 65535");
}

ApSpec parse_ap(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path,
               {"id", "mac", "ip", "channel", "position_m", "power_on_ms",
                "power_on_jitter_ms", "power_on_after_id", "power_off_ms", "segment"});
    ApSpec ap;
    auto* id = find(j, "id");
    if (!id) fail(path, "missing \"id\"");
    ap.id = as_string(*id, path + ".id");
    if (ap.id.empty()) fail(path + ".id", "must not be empty");

    auto* mac = find(j, "mac");
    if (!mac) fail(path, "missing \"mac\"");
    ap.mac = as_mac(*mac, path + ".mac");

    auto* ip = find(j, "ip");
    if (!ip) fail(path, "missing \"ip\"");
    ap.ip = as_ip(*ip, path + ".ip");

    auto* channel = find(j, "channel");
    if (!channel) fail(path, "missing \"channel\"");
    auto ch = as_integer(*channel, path + ".channel");
    if (ch < 1 || ch > 32) fail(path + ".channel", "must be 1..32");
    ap.channel = static_cast<std::uint8_t>(ch);

    auto* pos = find(j, "position_m");
    if (!pos) fail(path, "missing \"position_m\"");
    ap.position = as_vec2(*pos, path + ".position_m");

    if (auto* v = find(j, "power_on_ms"))
        ap.power_on = nonneg_ms(*v, path + ".power_on_ms");
    if (auto* v = find(j, "power_on_jitter_ms"))
        ap.power_on_jitter = nonneg_ms(*v, path + ".power_on_jitter_ms");
    if (auto* v = find(j, "power_on_after_id"))
        ap.power_on_after_id = as_string(*v, path + ".power_on_after_id");
    if (auto* v = find(j, "power_off_ms"))
        ap.power_off = positive_ms(*v, path + ".power_off_ms");
    if (auto* v = find(j, "segment")) {
        ap.segment = as_string(*v, path + ".segment");
        if (ap.segment.empty()) fail(path + ".segment", "must not be empty");
    }
    return ap;
}

StationSpec parse_station(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path,
               {"id", "mode", "mac", "start_position_m", "velocity_mps",
                "handoff_threshold_dbm", "initial_ap", "motion_start_ms"});
    StationSpec ms;
    auto* id = find(j, "id");
    if (!id) fail(path, "missing \"id\"");
    ms.id = as_string(*id, path + ".id");
    if (ms.id.empty()) fail(path + ".id", "must not be empty");

    if (auto* v = find(j, "mode")) {
        auto text = as_string(*v, path + ".mode");
        if (text == "andwc") {
            ms.mode = StationMode::NeighborCache;
        } else if (text == "baseline_full_scan") {
            ms.mode = StationMode::BaselineFullScan;
        } else {
            fail(path + ".mode", "expected \"andwc\" or \"baseline_full_scan\"");
        }
    }

    auto* mac = find(j, "mac");
    if (!mac) fail(path, "missing \"mac\"");
    ms.mac = as_mac(*mac, path + ".mac");

    auto* pos = find(j, "start_position_m");
    if (!pos) fail(path, "missing \"start_position_m\"");
    ms.start_position = as_vec2(*pos, path + ".start_position_m");

    if (auto* v = find(j, "velocity_mps"))
        ms.velocity_mps = as_vec2(*v, path + ".velocity_mps");
    if (auto* v = find(j, "handoff_threshold_dbm"))
        ms.handoff_threshold =
            wire::Rss::from_dbm(as_number(*v, path + ".handoff_threshold_dbm"));
    if (auto* v = find(j, "initial_ap"))
        ms.initial_ap_id = as_string(*v, path + ".initial_ap");
    if (auto* v = find(j, "motion_start_ms"))
        ms.motion_start = nonneg_ms(*v, path + ".motion_start_ms");
    return ms;
}

TrafficSpec parse_traffic(const json& j, const std::string& path, std::size_t index) {
    expect_object(j, path);
    check_keys(j, path,
               {"name", "destination", "start_ms", "packet_interval_ms",
                "total_packets"});
    TrafficSpec t;
    t.name = "stream" + std::to_string(index);
    if (auto* v = find(j, "name")) t.name = as_string(*v, path + ".name");

    auto* dst = find(j, "destination");
    if (!dst) fail(path, "missing \"destination\"");
    t.destination = as_string(*dst, path + ".destination");

    if (auto* v = find(j, "start_ms")) t.start = nonneg_ms(*v, path + ".start_ms");

    auto* interval = find(j, "packet_interval_ms");
    if (!interval) fail(path, "missing \"packet_interval_ms\"");
    t.interval = positive_ms(*interval, path + ".packet_interval_ms");

    auto* total = find(j, "total_packets");
    if (!total) fail(path, "missing \"total_packets\"");
    t.total_packets = as_integer(*total, path + ".total_packets");
    if (t.total_packets <= 0) fail(path + ".total_packets", "must be positive");
    return t;
}

Expect parse_expect(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path,
               {"handoffs", "packet_loss", "all_aps_operational",
                "verification_mutual_exclusion", "air_verification_frames"});
    Expect e;
    if (auto* v = find(j, "handoffs")) {
        expect_array(*v, path + ".handoffs");
        for (std::size_t i = 0; i < v->size(); ++i) {
            auto ipath = path + ".handoffs[" + std::to_string(i) + "]";
            const auto& h = (*v)[i];
            expect_object(h, ipath);
            check_keys(h, ipath,
                       {"station", "count", "latency_ms", "via_full_scan", "target"});
            HandoffExpect he;
            auto* station = find(h, "station");
            if (!station) fail(ipath, "missing \"station\"");
            he.station = as_string(*station, ipath + ".station");
            if (auto* c = find(h, "count")) {
                auto n = as_integer(*c, ipath + ".count");
                if (n < 0) fail(ipath + ".count", "must not be negative");
                he.count = static_cast<int>(n);
            }
            if (auto* b = find(h, "latency_ms"))
                he.latency_ms = parse_bounds(*b, ipath + ".latency_ms");
            if (auto* f = find(h, "via_full_scan"))
                he.via_full_scan = as_bool(*f, ipath + ".via_full_scan");
            if (auto* t = find(h, "target"))
                he.target = as_string(*t, ipath + ".target");
            e.handoffs.push_back(std::move(he));
        }
    }
    if (auto* v = find(j, "packet_loss")) {
        expect_array(*v, path + ".packet_loss");
        for (std::size_t i = 0; i < v->size(); ++i) {
            auto ipath = path + ".packet_loss[" + std::to_string(i) + "]";
            const auto& p = (*v)[i];
            expect_object(p, ipath);
            check_keys(p, ipath, {"source", "min", "max"});
            LossExpect le;
            if (auto* s = find(p, "source"))
                le.source = as_string(*s, ipath + ".source");
            json bounds = json::object();
            if (auto* m = find(p, "min")) bounds["min"] = *m;
            if (auto* m = find(p, "max")) bounds["max"] = *m;
            le.packets_lost = parse_bounds(bounds, ipath);
            e.packet_loss.push_back(std::move(le));
        }
    }
    if (auto* v = find(j, "all_aps_operational"))
        e.all_aps_operational = as_bool(*v, path + ".all_aps_operational");
    if (auto* v = find(j, "verification_mutual_exclusion"))
        e.verification_mutual_exclusion =
            as_bool(*v, path + ".verification_mutual_exclusion");
    if (auto* v = find(j, "air_verification_frames")) {
        auto n = as_integer(*v, path + ".air_verification_frames");
        if (n < 0) fail(path + ".air_verification_frames", "must not be negative");
        e.air_verification_frames = n;
    }
    return e;
}

void cross_validate(Scenario& s) {
    std::set<std::string> ids;
    std::set<wire::MacAddress> macs;
    std::set<wire::Ipv4> ips;
    std::set<std::uint8_t> band(s.channels.begin(), s.channels.end());

    std::set<std::string> seen_aps;
    for (const auto& ap : s.aps) {
        if (!ids.insert(ap.id).second) fail("aps", "duplicate id \"" + ap.id + "\"");
        if (!macs.insert(ap.mac).second)
            fail("aps", "duplicate mac " + ap.mac.to_string());
        if (!ips.insert(ap.ip).second) fail("aps", "duplicate ip " + ap.ip.to_string());
        if (!band.count(ap.channel))
            fail("aps", "\"" + ap.id + "\" sits on channel " +
                            std::to_string(int(ap.channel)) + " outside band " + s.band);
        if (ap.power_on_after_id) {
            if (!seen_aps.count(*ap.power_on_after_id))
                fail("aps", "\"" + ap.id + "\" power_on_after_id \"" +
                                *ap.power_on_after_id +
                                "\" must name an earlier ap");
        }
        seen_aps.insert(ap.id);
    }
    for (const auto& ms : s.stations) {
        if (!ids.insert(ms.id).second)
            fail("stations", "duplicate id \"" + ms.id + "\"");
        if (!macs.insert(ms.mac).second)
            fail("stations", "duplicate mac " + ms.mac.to_string());
        if (ms.initial_ap_id && !s.find_ap(*ms.initial_ap_id))
            fail("stations", "\"" + ms.id + "\" initial_ap \"" + *ms.initial_ap_id +
                                 "\" does not exist");
    }
    for (const auto& t : s.traffic) {
        if (!s.find_station(t.destination))
            fail("traffic", "destination \"" + t.destination +
                                "\" is not a station");
    }
    for (const auto& he : s.expect.handoffs) {
        if (!s.find_station(he.station))
            fail("expect.handoffs", "station \"" + he.station + "\" does not exist");
        if (he.target && !s.find_ap(*he.target))
            fail("expect.handoffs", "target \"" + *he.target + "\" does not exist");
    }
    for (const auto& le : s.expect.packet_loss) {
        if (le.source) {
            bool known = std::any_of(s.traffic.begin(), s.traffic.end(),
                                     [&](const TrafficSpec& t) {
                                         return t.name == *le.source;
                                     });
            if (!known)
                fail("expect.packet_loss",
                     "source \"" + *le.source + "\" does not exist");
        }
    }
    if (s.timing.probe_response_latency < s.links.air_latency * 2)
        fail("timing.probe_response_latency_ms",
             "shorter than two air hops; no AP could answer that fast");
}

}  // namespace

const ApSpec* Scenario::find_ap(const std::string& id) const {
    for (const auto& ap : aps)
        if (ap.id == id) return &ap;
    return nullptr;
}

const StationSpec* Scenario::find_station(const std::string& id) const {
    for (const auto& ms : stations)
        if (ms.id == id) return &ms;
    return nullptr;
}

wire::ApInfoEntry Scenario::ap_entry(const ApSpec& ap) const {
    return wire::ApInfoEntry(
        ap.id, ap.mac, ap.mac, ap.ip, ap.channel,
        static_cast<std::uint16_t>(timing.beacon_interval.us / 1000));
}

Scenario parse_scenario(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(origin + ": " + e.what());
    }
    expect_object(root, origin);
    check_keys(root, origin,
               {"name", "seed", "duration_ms", "band", "lan", "air", "radio",
                "timing", "aps", "stations", "traffic", "expect"});

    Scenario s;
    auto* name = find(root, "name");
    if (!name) fail(origin, "missing \"name\"");
    s.name = as_string(*name, "name");
    if (s.name.empty()) fail("name", "must not be empty");

    if (auto* v = find(root, "seed")) {
        auto n = as_integer(*v, "seed");
        if (n < 0) fail("seed", "must not be negative");
        s.seed = static_cast<std::uint64_t>(n);
    }

    auto* duration = find(root, "duration_ms");
    if (!duration) fail(origin, "missing \"duration_ms\"");
    s.duration = positive_ms(*duration, "duration_ms");

    if (auto* v = find(root, "band")) s.band = as_string(*v, "band");
    int top_channel = 0;
    if (s.band == "bg11") {
        top_channel = 11;
    } else if (s.band == "a32") {
        top_channel = 32;
    } else {
        fail("band", "expected \"bg11\" or \"a32\"");
    }
    for (int c = 1; c <= top_channel; ++c)
        s.channels.push_back(static_cast<std::uint8_t>(c));

    if (auto* v = find(root, "lan")) {
        expect_object(*v, "lan");
        check_keys(*v, "lan", {"latency_ms"});
        if (auto* l = find(*v, "latency_ms"))
            s.links.lan_latency = positive_ms(*l, "lan.latency_ms");
    }
    if (auto* v = find(root, "air")) {
        expect_object(*v, "air");
        check_keys(*v, "air", {"latency_ms"});
        if (auto* l = find(*v, "latency_ms"))
            s.links.air_latency = positive_ms(*l, "air.latency_ms");
    }
    if (auto* v = find(root, "radio")) {
        expect_object(*v, "radio");
        check_keys(*v, "radio",
                   {"tx_power_dbm", "reference_loss_db", "path_loss_exponent",
                    "range_cutoff_dbm"});
        if (auto* r = find(*v, "tx_power_dbm"))
            s.radio.tx_power_dbm = as_number(*r, "radio.tx_power_dbm");
        if (auto* r = find(*v, "reference_loss_db"))
            s.radio.reference_loss_db = as_number(*r, "radio.reference_loss_db");
        if (auto* r = find(*v, "path_loss_exponent")) {
            s.radio.path_loss_exponent = as_number(*r, "radio.path_loss_exponent");
            if (s.radio.path_loss_exponent <= 0)
                fail("radio.path_loss_exponent", "must be positive");
        }
        if (auto* r = find(*v, "range_cutoff_dbm"))
            s.radio.range_cutoff_dbm = as_number(*r, "radio.range_cutoff_dbm");
    }
    if (auto* v = find(root, "timing")) parse_timing(*v, "timing", s.timing);

    auto* aps = find(root, "aps");
    if (!aps) fail(origin, "missing \"aps\"");
    expect_array(*aps, "aps");
    if (aps->empty()) fail("aps", "must not be empty");
    for (std::size_t i = 0; i < aps->size(); ++i)
        s.aps.push_back(parse_ap((*aps)[i], "aps[" + std::to_string(i) + "]"));

    if (auto* v = find(root, "stations")) {
        expect_array(*v, "stations");
        for (std::size_t i = 0; i < v->size(); ++i)
            s.stations.push_back(
                parse_station((*v)[i], "stations[" + std::to_string(i) + "]"));
    }
    if (auto* v = find(root, "traffic")) {
        expect_array(*v, "traffic");
        for (std::size_t i = 0; i < v->size(); ++i)
            s.traffic.push_back(
                parse_traffic((*v)[i], "traffic[" + std::to_string(i) + "]", i));
    }
    if (auto* v = find(root, "expect")) s.expect = parse_expect(*v, "expect");

    cross_validate(s);
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

}  // namespace andwc::harness
