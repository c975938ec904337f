#pragma once

// Shared field-level codec for the composite APInfo entry, used by both the
// wired-packet and the management-frame codecs. Internal to the wire module.

#include <optional>

#include "andwc/wire/codec.hpp"
#include "andwc/wire/types.hpp"

namespace andwc::wire::detail {

void write_mac(ByteWriter& w, const MacAddress& mac);
void write_ip(ByteWriter& w, const Ipv4& ip);
void write_bool(ByteWriter& w, bool v);
void write_entry(ByteWriter& w, const ApInfoEntry& entry);

MacAddress read_mac(ByteReader& r);
Ipv4 read_ip(ByteReader& r);
std::optional<DecodeError> read_bool(ByteReader& r, bool& out);
std::optional<DecodeError> read_entry(ByteReader& r, ApInfoEntry& out);

inline DecodeError truncated(const char* what) {
    return {DecodeErrorKind::truncated_payload, what};
}

}  // namespace andwc::wire::detail
