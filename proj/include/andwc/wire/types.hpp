#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace andwc::wire {

// WNIC / BSSID address. Byte-wise ordering is the voting order used by the
// AP bring-up protocol, so the comparison operators here are load-bearing.
struct MacAddress {
    std::array<std::uint8_t, 6> bytes{};

    auto operator<=>(const MacAddress&) const = default;

    static MacAddress broadcast();
    // Parses "aa:bb:cc:dd:ee:ff" (case-insensitive). Throws std::invalid_argument.
    static MacAddress parse(const std::string& text);
    std::string to_string() const;
};

struct Ipv4 {
    std::array<std::uint8_t, 4> octets{};

    auto operator<=>(const Ipv4&) const = default;

    // 224.0.1.178, the well-known inter-AP protocol multicast group.
    static Ipv4 iapp_multicast();
    static Ipv4 parse(const std::string& text);
    std::string to_string() const;
    bool is_multicast() const { return *this == iapp_multicast(); }
};

// Received signal strength, fixed point in 0.5 dB steps. All protocol-visible
// signal values are quantized to this grid so comparisons and sort orders are
// exact and reproducible.
struct Rss {
    std::int16_t half_db = 0;

    auto operator<=>(const Rss&) const = default;

    static Rss from_dbm(double dbm);
    double dbm() const { return half_db / 2.0; }
    std::string to_string() const;  // "-85.5"
};

// One row of an AP's APInfo list; also the self-description every AP embeds
// in its protocol packets and beacons.
struct ApInfoEntry {
    std::string ssid;                 // <= 32 bytes
    MacAddress bssid;
    MacAddress mac;                   // WNIC address; the voting key
    Ipv4 ip;
    std::uint8_t channel = 1;         // 1..32
    std::uint16_t beacon_interval_ms = 100;
    bool real_neighbor = false;
    std::optional<Rss> rss;           // present once the link has been measured

    ApInfoEntry() = default;
    ApInfoEntry(std::string ssid, MacAddress bssid, MacAddress mac, Ipv4 ip,
                std::uint8_t channel, std::uint16_t beacon_interval_ms,
                bool real_neighbor = false, std::optional<Rss> rss = std::nullopt);

    // Throws std::invalid_argument when a field is out of domain.
    void validate() const;

    bool operator==(const ApInfoEntry&) const = default;
};

}  // namespace andwc::wire
