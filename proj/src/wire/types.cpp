#include "andwc/wire/types.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace andwc::wire {

MacAddress MacAddress::broadcast() {
    return MacAddress{{0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF}};
}

MacAddress MacAddress::parse(const std::string& text) {
    MacAddress mac;
    unsigned v[6];
    if (std::sscanf(text.c_str(), "%x:%x:%x:%x:%x:%x",
                    &v[0], &v[1], &v[2], &v[3], &v[4], &v[5]) != 6)
        throw std::invalid_argument("bad mac address: " + text);
    for (int i = 0; i < 6; ++i) {
        if (v[i] > 0xFF) throw std::invalid_argument("bad mac address: " + text);
        mac.bytes[i] = static_cast<std::uint8_t>(v[i]);
    }
    return mac;
}

std::string MacAddress::to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x",
                  bytes[0], bytes[1], bytes[2], bytes[3], bytes[4], bytes[5]);
    return buf;
}

Ipv4 Ipv4::iapp_multicast() {
    return Ipv4{{224, 0, 1, 178}};
}

Ipv4 Ipv4::parse(const std::string& text) {
    Ipv4 ip;
    unsigned v[4];
    if (std::sscanf(text.c_str(), "%u.%u.%u.%u", &v[0], &v[1], &v[2], &v[3]) != 4)
        throw std::invalid_argument("bad ipv4 address: " + text);
    for (int i = 0; i < 4; ++i) {
        if (v[i] > 255) throw std::invalid_argument("bad ipv4 address: " + text);
        ip.octets[i] = static_cast<std::uint8_t>(v[i]);
    }
    return ip;
}

std::string Ipv4::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u",
                  octets[0], octets[1], octets[2], octets[3]);
    return buf;
}

Rss Rss::from_dbm(double dbm) {
    double scaled = std::llround(dbm * 2.0);
    if (scaled < INT16_MIN || scaled > INT16_MAX)
        throw std::invalid_argument("rss out of range");
    return Rss{static_cast<std::int16_t>(scaled)};
}

std::string Rss::to_string() const {
    int whole = half_db / 2;
    bool half = half_db % 2 != 0;
    char buf[16];
    if (half_db < 0 && whole == 0)  // e.g. -0.5
        std::snprintf(buf, sizeof buf, "-0.%c", half ? '5' : '0');
    else
        std::snprintf(buf, sizeof buf, "%d.%c", whole, half ? '5' : '0');
    return buf;
}

ApInfoEntry::ApInfoEntry(std::string ssid_, MacAddress bssid_, MacAddress mac_,
                         Ipv4 ip_, std::uint8_t channel_,
                         std::uint16_t beacon_interval_ms_, bool real_neighbor_,
                         std::optional<Rss> rss_)
    : ssid(std::move(ssid_)),
      bssid(bssid_),
      mac(mac_),
      ip(ip_),
      channel(channel_),
      beacon_interval_ms(beacon_interval_ms_),
      real_neighbor(real_neighbor_),
      rss(rss_) {
    validate();
}

void ApInfoEntry::validate() const {
    if (ssid.size() > 32)
        throw std::invalid_argument("ssid longer than 32 bytes");
    if (channel < 1 || channel > 32)
        throw std::invalid_argument("channel out of range 1..32");
    if (beacon_interval_ms == 0)
        throw std::invalid_argument("beacon interval must be positive");
}

}  // namespace andwc::wire
