#include "andwc/wire/frames.hpp"

#include "entry_codec.hpp"

namespace andwc::wire {

using detail::ByteReader;
using detail::ByteWriter;

namespace {

bool rss_descending(const std::vector<ApInfoEntry>& neighbors) {
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        if (!neighbors[i].rss) return false;
        if (i > 0 && neighbors[i].rss->half_db > neighbors[i - 1].rss->half_db)
            return false;
    }
    return true;
}

}  // namespace

Beacon::Beacon(ApInfoEntry ap_, std::vector<ApInfoEntry> neighbors)
    : ap(std::move(ap_)), neighbor_list(std::move(neighbors)) {
    if (!rss_descending(neighbor_list))
        throw std::invalid_argument(
            "beacon neighbor list must carry rss values sorted strongest-first");
}

std::vector<std::uint8_t> encode_frame(const MgmtFrame& frame) {
    if (frame.channel < 1 || frame.channel > 32)
        throw std::invalid_argument("frame channel out of range 1..32");
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(frame.subtype()));
    detail::write_mac(w, frame.src_mac);
    detail::write_mac(w, frame.dst_mac);
    w.u8(frame.channel);
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, ApInfoReqFrame>) {
                detail::write_entry(w, body.sender);
            } else if constexpr (std::is_same_v<T, ApInfoResFrame>) {
                detail::write_entry(w, body.sender);
                w.i16(body.measured_rss_of_req.half_db);
            } else if constexpr (std::is_same_v<T, ApInfoAckFrame>) {
                detail::write_entry(w, body.sender);
                w.i16(body.rss_of_response.half_db);
            } else if constexpr (std::is_same_v<T, ApInfoUpdateFrame>) {
                detail::write_entry(w, body.old_ap);
            } else if constexpr (std::is_same_v<T, Beacon>) {
                if (!rss_descending(body.neighbor_list))
                    throw std::invalid_argument("beacon neighbor list unsorted");
                detail::write_entry(w, body.ap);
                w.u16(static_cast<std::uint16_t>(body.neighbor_list.size()));
                for (const auto& n : body.neighbor_list) detail::write_entry(w, n);
            } else if constexpr (std::is_same_v<T, ProbeReq>) {
                // empty body
            } else if constexpr (std::is_same_v<T, ProbeRes>) {
                detail::write_entry(w, body.ap);
            } else if constexpr (std::is_same_v<T, AuthReq>) {
                detail::write_mac(w, body.ms_id);
            } else if constexpr (std::is_same_v<T, AuthRes>) {
                detail::write_bool(w, body.accepted);
            } else if constexpr (std::is_same_v<T, AssocReq>) {
                detail::write_mac(w, body.ms_id);
            } else {
                static_assert(std::is_same_v<T, AssocRes>);
                detail::write_bool(w, body.accepted);
            }
        },
        frame.body);
    return w.take();
}

DecodeResult<MgmtFrame> decode_frame(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    std::uint8_t subtype = r.u8();
    if (r.underrun()) return detail::truncated("subtype byte");
    if (subtype < 1 || subtype > 11)
        return DecodeError{DecodeErrorKind::unknown_subtype,
                           "subtype " + std::to_string(subtype) + " is not defined"};

    MgmtFrame frame;
    frame.src_mac = detail::read_mac(r);
    frame.dst_mac = detail::read_mac(r);
    frame.channel = r.u8();
    if (r.underrun()) return detail::truncated("frame header");
    if (frame.channel < 1 || frame.channel > 32)
        return DecodeError{DecodeErrorKind::invalid_field, "frame channel out of range 1..32"};

    switch (subtype) {
        case 1: {
            ApInfoReqFrame body;
            if (auto err = detail::read_entry(r, body.sender)) return *err;
            frame.body = std::move(body);
            break;
        }
        case 2: {
            ApInfoResFrame body;
            if (auto err = detail::read_entry(r, body.sender)) return *err;
            body.measured_rss_of_req = Rss{r.i16()};
            if (r.underrun()) return detail::truncated("measured rss");
            frame.body = std::move(body);
            break;
        }
        case 3: {
            ApInfoAckFrame body;
            if (auto err = detail::read_entry(r, body.sender)) return *err;
            body.rss_of_response = Rss{r.i16()};
            if (r.underrun()) return detail::truncated("response rss");
            frame.body = std::move(body);
            break;
        }
        case 4: {
            ApInfoUpdateFrame body;
            if (auto err = detail::read_entry(r, body.old_ap)) return *err;
            frame.body = std::move(body);
            break;
        }
        case 5: {
            ApInfoEntry ap;
            if (auto err = detail::read_entry(r, ap)) return *err;
            std::uint16_t count = r.u16();
            if (r.underrun()) return detail::truncated("neighbor count");
            std::vector<ApInfoEntry> neighbors(count);
            for (auto& n : neighbors)
                if (auto err = detail::read_entry(r, n)) return *err;
            // Re-verify the sort contract rather than trusting the sender.
            if (!rss_descending(neighbors))
                return DecodeError{DecodeErrorKind::malformed_beacon,
                                   "neighbor list not sorted strongest-first"};
            Beacon body;
            body.ap = std::move(ap);
            body.neighbor_list = std::move(neighbors);
            frame.body = std::move(body);
            break;
        }
        case 6:
            frame.body = ProbeReq{};
            break;
        case 7: {
            ProbeRes body;
            if (auto err = detail::read_entry(r, body.ap)) return *err;
            frame.body = std::move(body);
            break;
        }
        case 8: {
            AuthReq body;
            body.ms_id = detail::read_mac(r);
            if (r.underrun()) return detail::truncated("station id");
            frame.body = body;
            break;
        }
        case 9: {
            AuthRes body;
            if (auto err = detail::read_bool(r, body.accepted)) return *err;
            frame.body = body;
            break;
        }
        case 10: {
            AssocReq body;
            body.ms_id = detail::read_mac(r);
            if (r.underrun()) return detail::truncated("station id");
            frame.body = body;
            break;
        }
        default: {
            AssocRes body;
            if (auto err = detail::read_bool(r, body.accepted)) return *err;
            frame.body = body;
            break;
        }
    }

    if (r.remaining() != 0)
        return DecodeError{DecodeErrorKind::trailing_bytes,
                           std::to_string(r.remaining()) + " bytes past end of frame"};
    return frame;
}

const char* frame_name(const FrameBody& body) {
    switch (body.index()) {
        case 0:  return "ApInfoReqFrame";
        case 1:  return "ApInfoResFrame";
        case 2:  return "ApInfoAckFrame";
        case 3:  return "ApInfoUpdateFrame";
        case 4:  return "Beacon";
        case 5:  return "ProbeReq";
        case 6:  return "ProbeRes";
        case 7:  return "AuthReq";
        case 8:  return "AuthRes";
        case 9:  return "AssocReq";
        case 10: return "AssocRes";
    }
    return "?";
}

}  // namespace andwc::wire
