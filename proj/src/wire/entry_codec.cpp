#include "entry_codec.hpp"

namespace andwc::wire::detail {

void write_mac(ByteWriter& w, const MacAddress& mac) {
    w.raw(mac.bytes);
}

void write_ip(ByteWriter& w, const Ipv4& ip) {
    w.raw(ip.octets);
}

void write_bool(ByteWriter& w, bool v) {
    w.u8(v ? 1 : 0);
}

// Entry body: ssid(u8 len + bytes) | bssid | mac | ip | channel u8 |
// beacon_interval u16 | real_neighbor u8 | rss(u8 flag [+ i16]).
// The whole body is u16 length-prefixed.
void write_entry(ByteWriter& w, const ApInfoEntry& entry) {
    entry.validate();
    ByteWriter body;
    body.u8(static_cast<std::uint8_t>(entry.ssid.size()));
    body.raw({reinterpret_cast<const std::uint8_t*>(entry.ssid.data()), entry.ssid.size()});
    write_mac(body, entry.bssid);
    write_mac(body, entry.mac);
    write_ip(body, entry.ip);
    body.u8(entry.channel);
    body.u16(entry.beacon_interval_ms);
    write_bool(body, entry.real_neighbor);
    if (entry.rss) {
        body.u8(1);
        body.i16(entry.rss->half_db);
    } else {
        body.u8(0);
    }
    auto bytes = body.take();
    w.u16(static_cast<std::uint16_t>(bytes.size()));
    w.raw(bytes);
}

MacAddress read_mac(ByteReader& r) {
    MacAddress mac;
    r.raw(mac.bytes.data(), mac.bytes.size());
    return mac;
}

Ipv4 read_ip(ByteReader& r) {
    Ipv4 ip;
    r.raw(ip.octets.data(), ip.octets.size());
    return ip;
}

std::optional<DecodeError> read_bool(ByteReader& r, bool& out) {
    std::uint8_t v = r.u8();
    if (r.underrun()) return truncated("boolean field");
    if (v > 1)
        return DecodeError{DecodeErrorKind::invalid_field, "boolean field not 0/1"};
    out = v == 1;
    return std::nullopt;
}

std::optional<DecodeError> read_entry(ByteReader& r, ApInfoEntry& out) {
    std::uint16_t len = r.u16();
    ByteReader body = r.slice(len);
    if (r.underrun()) return truncated("ap info entry");

    std::uint8_t ssid_len = body.u8();
    if (body.underrun()) return truncated("ap info entry");
    if (ssid_len > 32)
        return DecodeError{DecodeErrorKind::invalid_field, "ssid longer than 32 bytes"};
    std::string ssid(ssid_len, '\0');
    body.raw(reinterpret_cast<std::uint8_t*>(ssid.data()), ssid_len);

    MacAddress bssid = read_mac(body);
    MacAddress mac = read_mac(body);
    Ipv4 ip = read_ip(body);
    std::uint8_t channel = body.u8();
    std::uint16_t interval = body.u16();
    if (body.underrun()) return truncated("ap info entry");

    bool real = false;
    if (auto err = read_bool(body, real)) return err;

    std::uint8_t rss_flag = body.u8();
    if (body.underrun()) return truncated("ap info entry");
    if (rss_flag > 1)
        return DecodeError{DecodeErrorKind::invalid_field, "rss presence flag not 0/1"};
    std::optional<Rss> rss;
    if (rss_flag == 1) {
        Rss v{body.i16()};
        if (body.underrun()) return truncated("ap info entry");
        rss = v;
    }

    if (body.remaining() != 0)
        return DecodeError{DecodeErrorKind::invalid_field, "entry length prefix mismatch"};

    try {
        out = ApInfoEntry(std::move(ssid), bssid, mac, ip, channel, interval, real, rss);
    } catch (const std::invalid_argument& e) {
        return DecodeError{DecodeErrorKind::invalid_field, e.what()};
    }
    return std::nullopt;
}

}  // namespace andwc::wire::detail
