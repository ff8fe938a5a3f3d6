#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace czk {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProtocolViolation : std::logic_error {
    using std::logic_error::logic_error;
};

inline void append(Bytes& out, ByteView v) { out.insert(out.end(), v.begin(), v.end()); }

inline void append_u32le(Bytes& out, uint32_t v) {
    for (int i = 0; i < 4; i++) out.push_back(uint8_t(v >> (8 * i)));
}

inline void append_u64le(Bytes& out, uint64_t v) {
    for (int i = 0; i < 8; i++) out.push_back(uint8_t(v >> (8 * i)));
}

// Canonical length-prefixed encoding: u32le(len) || payload. Every message that
// enters a transcript hash goes through this, so histories are bit-exact.
inline void append_framed(Bytes& out, ByteView payload) {
    append_u32le(out, uint32_t(payload.size()));
    append(out, payload);
}

// An m-tuple of messages: u32le(m) then each entry framed.
inline void append_block(Bytes& out, const std::vector<Bytes>& block) {
    append_u32le(out, uint32_t(block.size()));
    for (const auto& msg : block) append_framed(out, msg);
}

inline uint64_t load_u64le(ByteView v, size_t off) {
    uint64_t x = 0;
    for (int i = 0; i < 8; i++) x |= uint64_t(v[off + i]) << (8 * i);
    return x;
}

// Bit access, LSB-first within each byte.
inline int get_bit(ByteView v, size_t bit) { return (v[bit >> 3] >> (bit & 7)) & 1; }

inline void set_bit(Bytes& v, size_t bit, int b) {
    if (b)
        v[bit >> 3] |= uint8_t(1u << (bit & 7));
    else
        v[bit >> 3] &= uint8_t(~(1u << (bit & 7)));
}

// Copies `nbits` bits from src[src_off..] into dst[dst_off..].
inline void copy_bits(Bytes& dst, size_t dst_off, ByteView src, size_t src_off, size_t nbits) {
    for (size_t i = 0; i < nbits; i++) set_bit(dst, dst_off + i, get_bit(src, src_off + i));
}

inline std::string to_hex(ByteView v) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(v.size() * 2);
    for (uint8_t b : v) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

}  // namespace czk
