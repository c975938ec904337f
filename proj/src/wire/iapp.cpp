#include "andwc/wire/iapp.hpp"

#include "entry_codec.hpp"

namespace andwc::wire {

using detail::ByteReader;
using detail::ByteWriter;

std::vector<std::uint8_t> encode_iapp(const IappPacket& packet) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(packet.command()));
    detail::write_ip(w, packet.src_ip);
    detail::write_ip(w, packet.dst_ip);
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, ApInfoReq>) {
                detail::write_entry(w, body.sender);
            } else if constexpr (std::is_same_v<T, ApInfoRes>) {
                detail::write_entry(w, body.sender);
                detail::write_bool(w, body.new_ap);
                detail::write_bool(w, body.i_am_the_last);
            } else if constexpr (std::is_same_v<T, Permission>) {
                detail::write_bool(w, body.i_am_the_last);
            } else if constexpr (std::is_same_v<T, NewNeighbourReq>) {
                detail::write_entry(w, body.sender);
            } else {
                static_assert(std::is_same_v<T, NewNeighbourRes>);
                detail::write_entry(w, body.sender);
            }
        },
        packet.body);
    return w.take();
}

DecodeResult<IappPacket> decode_iapp(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    std::uint8_t command = r.u8();
    if (r.underrun()) return detail::truncated("command byte");
    if (command <= 6)
        return DecodeError{DecodeErrorKind::reserved_command,
                           "command " + std::to_string(command) + " is reserved"};
    if (command > 11)
        return DecodeError{DecodeErrorKind::unknown_command,
                           "command " + std::to_string(command) + " is not defined"};

    IappPacket packet;
    packet.src_ip = detail::read_ip(r);
    packet.dst_ip = detail::read_ip(r);
    if (r.underrun()) return detail::truncated("address header");

    switch (command) {
        case 7: {
            ApInfoReq body;
            if (auto err = detail::read_entry(r, body.sender)) return *err;
            packet.body = std::move(body);
            break;
        }
        case 8: {
            ApInfoRes body;
            if (auto err = detail::read_entry(r, body.sender)) return *err;
            if (auto err = detail::read_bool(r, body.new_ap)) return *err;
            if (auto err = detail::read_bool(r, body.i_am_the_last)) return *err;
            packet.body = std::move(body);
            break;
        }
        case 9: {
            Permission body;
            if (auto err = detail::read_bool(r, body.i_am_the_last)) return *err;
            packet.body = body;
            break;
        }
        case 10: {
            NewNeighbourReq body;
            if (auto err = detail::read_entry(r, body.sender)) return *err;
            packet.body = std::move(body);
            break;
        }
        default: {
            NewNeighbourRes body;
            if (auto err = detail::read_entry(r, body.sender)) return *err;
            packet.body = std::move(body);
            break;
        }
    }

    if (r.remaining() != 0)
        return DecodeError{DecodeErrorKind::trailing_bytes,
                           std::to_string(r.remaining()) + " bytes past end of packet"};
    return packet;
}

const char* iapp_name(const IappBody& body) {
    switch (body.index()) {
        case 0: return "ApInfoReq";
        case 1: return "ApInfoRes";
        case 2: return "Permission";
        case 3: return "NewNeighbourReq";
        case 4: return "NewNeighbourRes";
    }
    return "?";
}

}  // namespace andwc::wire
