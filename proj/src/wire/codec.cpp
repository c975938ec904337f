#include "andwc/wire/codec.hpp"

#include <cstring>

namespace andwc::wire {

std::string to_string(DecodeErrorKind kind) {
    switch (kind) {
        case DecodeErrorKind::reserved_command:  return "reserved-command";
        case DecodeErrorKind::unknown_command:   return "unknown-command";
        case DecodeErrorKind::unknown_subtype:   return "unknown-subtype";
        case DecodeErrorKind::truncated_payload: return "truncated-payload";
        case DecodeErrorKind::trailing_bytes:    return "trailing-bytes";
        case DecodeErrorKind::malformed_beacon:  return "malformed-beacon";
        case DecodeErrorKind::invalid_field:     return "invalid-field";
    }
    return "unknown-error";
}

namespace detail {

void ByteWriter::u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void ByteWriter::raw(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
}

std::uint8_t ByteReader::u8() {
    if (pos_ >= data_.size()) {
        underrun_ = true;
        return 0;
    }
    return data_[pos_++];
}

std::uint16_t ByteReader::u16() {
    std::uint16_t hi = u8();
    std::uint16_t lo = u8();
    return static_cast<std::uint16_t>(hi << 8 | lo);
}

bool ByteReader::raw(std::uint8_t* out, std::size_t n) {
    if (remaining() < n) {
        underrun_ = true;
        pos_ = data_.size();
        return false;
    }
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
    return true;
}

ByteReader ByteReader::slice(std::size_t n) {
    if (remaining() < n) {
        underrun_ = true;
        pos_ = data_.size();
        return ByteReader({});
    }
    ByteReader sub(data_.subspan(pos_, n));
    pos_ += n;
    return sub;
}

}  // namespace detail

}  // namespace andwc::wire
