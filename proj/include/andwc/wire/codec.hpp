#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace andwc::wire {

enum class DecodeErrorKind {
    reserved_command,   // inter-AP command 0..6
    unknown_command,    // inter-AP command > 11
    unknown_subtype,    // management frame subtype outside 1..11
    truncated_payload,  // input ended before the layout was satisfied
    trailing_bytes,     // input continued past the layout
    malformed_beacon,   // neighbor list violates the descending-rss contract
    invalid_field,      // a field value is out of domain
};

std::string to_string(DecodeErrorKind kind);

struct DecodeError {
    DecodeErrorKind kind;
    std::string message;
};

template <typename T>
class DecodeResult {
public:
    DecodeResult(T value) : v_(std::move(value)) {}
    DecodeResult(DecodeError error) : v_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return std::get<T>(v_); }
    T&& value() && { return std::get<T>(std::move(v_)); }
    const DecodeError& error() const { return std::get<DecodeError>(v_); }

private:
    std::variant<T, DecodeError> v_;
};

namespace detail {

// Multi-byte integers are big-endian. Composite fields (APInfo entries) are
// u16 length-prefixed; strings are u8 length-prefixed.
class ByteWriter {
public:
    std::vector<std::uint8_t> take() { return std::move(out_); }

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v);
    void i16(std::int16_t v) { u16(static_cast<std::uint16_t>(v)); }
    void raw(std::span<const std::uint8_t> bytes);

private:
    std::vector<std::uint8_t> out_;
};

// Reads set `underrun` and return zeros once the input is exhausted; callers
// check the flag once per layout section instead of after every field.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
    bool raw(std::uint8_t* out, std::size_t n);
    // Carves out an n-byte sub-reader (for length-prefixed composites).
    ByteReader slice(std::size_t n);

    bool underrun() const { return underrun_; }
    std::size_t remaining() const { return data_.size() - pos_; }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    bool underrun_ = false;
};

}  // namespace detail

}  // namespace andwc::wire
