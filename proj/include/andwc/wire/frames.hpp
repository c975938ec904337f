#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "andwc/wire/codec.hpp"
#include "andwc/wire/types.hpp"

namespace andwc::wire {

// 802.11-style management frames, as extended by the fast-handoff scheme.
// The measured signal strength of a received frame is a property of the
// delivery, not of these payloads; only explicitly echoed measurements
// appear on the wire.
//
// Layout: u8 subtype | mac src | mac dst | u8 channel | body.

struct ApInfoReqFrame {     // subtype 1: over-the-air neighbor probe
    ApInfoEntry sender;
    bool operator==(const ApInfoReqFrame&) const = default;
};

struct ApInfoResFrame {     // subtype 2: echoes how strongly the request was heard
    ApInfoEntry sender;
    Rss measured_rss_of_req;
    bool operator==(const ApInfoResFrame&) const = default;
};

struct ApInfoAckFrame {     // subtype 3: echoes how strongly the response was heard
    ApInfoEntry sender;
    Rss rss_of_response;
    bool operator==(const ApInfoAckFrame&) const = default;
};

struct ApInfoUpdateFrame {  // subtype 4: station introduces its previous AP
    ApInfoEntry old_ap;     // old_ap.ip is how the new AP reaches it
    bool operator==(const ApInfoUpdateFrame&) const = default;
};

// Modified beacon: carries the sender's verified neighbors, strongest first.
// Order is a wire-level contract: construction rejects an unsorted list and
// decode re-verifies it.
struct Beacon {
    ApInfoEntry ap;
    std::vector<ApInfoEntry> neighbor_list;

    Beacon() = default;
    Beacon(ApInfoEntry ap, std::vector<ApInfoEntry> neighbors);
    bool operator==(const Beacon&) const = default;
};

struct ProbeReq {           // subtype 6
    bool operator==(const ProbeReq&) const = default;
};

struct ProbeRes {           // subtype 7
    ApInfoEntry ap;
    bool operator==(const ProbeRes&) const = default;
};

struct AuthReq {            // subtype 8
    MacAddress ms_id;
    bool operator==(const AuthReq&) const = default;
};

struct AuthRes {            // subtype 9
    bool accepted = false;
    bool operator==(const AuthRes&) const = default;
};

struct AssocReq {           // subtype 10
    MacAddress ms_id;
    bool operator==(const AssocReq&) const = default;
};

struct AssocRes {           // subtype 11
    bool accepted = false;
    bool operator==(const AssocRes&) const = default;
};

using FrameBody = std::variant<ApInfoReqFrame, ApInfoResFrame, ApInfoAckFrame,
                               ApInfoUpdateFrame, Beacon, ProbeReq, ProbeRes,
                               AuthReq, AuthRes, AssocReq, AssocRes>;

inline constexpr int kFrameSubtypeBase = 1;  // variant index 0 encodes as 1

struct MgmtFrame {
    MacAddress src_mac;
    MacAddress dst_mac;
    std::uint8_t channel = 1;  // 1..32
    FrameBody body;

    int subtype() const { return kFrameSubtypeBase + static_cast<int>(body.index()); }
    bool operator==(const MgmtFrame&) const = default;
};

std::vector<std::uint8_t> encode_frame(const MgmtFrame& frame);
DecodeResult<MgmtFrame> decode_frame(std::span<const std::uint8_t> bytes);

const char* frame_name(const FrameBody& body);

}  // namespace andwc::wire
