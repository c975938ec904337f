#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "andwc/wire/codec.hpp"
#include "andwc/wire/types.hpp"

namespace andwc::wire {

// Inter-AP protocol packets, carried over the wired distribution system.
// Command numbers 0..6 are reserved by the base protocol; this extension
// occupies 7..11.
//
// Layout: u8 command | ipv4 src | ipv4 dst | body.

struct ApInfoReq {          // command 7, multicast at AP power-on
    ApInfoEntry sender;
    bool operator==(const ApInfoReq&) const = default;
};

struct ApInfoRes {          // command 8
    ApInfoEntry sender;
    bool new_ap = false;         // tells the caller it joined an established set
    bool i_am_the_last = false;  // responder's own tail status before this request
    bool operator==(const ApInfoRes&) const = default;
};

struct Permission {         // command 9, hands the air-verification token on
    bool i_am_the_last = false;  // recipient is the tail of the sender's mac list
    bool operator==(const Permission&) const = default;
};

struct NewNeighbourReq {    // command 10, station-reported neighbor introduction
    ApInfoEntry sender;
    bool operator==(const NewNeighbourReq&) const = default;
};

struct NewNeighbourRes {    // command 11
    ApInfoEntry sender;
    bool operator==(const NewNeighbourRes&) const = default;
};

using IappBody = std::variant<ApInfoReq, ApInfoRes, Permission,
                              NewNeighbourReq, NewNeighbourRes>;

inline constexpr int kIappCommandBase = 7;  // variant index 0 encodes as 7

struct IappPacket {
    Ipv4 src_ip;
    Ipv4 dst_ip;
    IappBody body;

    int command() const { return kIappCommandBase + static_cast<int>(body.index()); }
    bool operator==(const IappPacket&) const = default;
};

std::vector<std::uint8_t> encode_iapp(const IappPacket& packet);
DecodeResult<IappPacket> decode_iapp(std::span<const std::uint8_t> bytes);

const char* iapp_name(const IappBody& body);

}  // namespace andwc::wire
