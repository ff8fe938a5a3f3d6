#pragma once

#include <cstdint>

namespace czk {

// GF(2^64), reduction polynomial x^64 + x^4 + x^3 + x + 1.
// Field elements map bijectively onto 64-bit words, so a uniform element is a
// uniform bit string — which is what makes polynomial members of the hash
// family produce exactly uniform output chunks.
namespace gf64 {

constexpr uint64_t kReduction = 0x1b;  // low part of the modulus

// Carry-less 64x64 -> 128 multiply, 4-bit windowed.
inline void clmul(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
    uint64_t tab_lo[16], tab_hi[16];
    tab_lo[0] = 0;
    tab_hi[0] = 0;
    for (int i = 1; i < 16; i++) {
        if (i & 1) {
            tab_lo[i] = tab_lo[i ^ 1] ^ a;
            tab_hi[i] = tab_hi[i ^ 1];
        } else {
            int half = i >> 1;
            tab_lo[i] = tab_lo[half] << 1;
            tab_hi[i] = (tab_hi[half] << 1) | (tab_lo[half] >> 63);
        }
    }
    hi = 0;
    lo = 0;
    for (int shift = 60; shift >= 0; shift -= 4) {
        hi = (hi << 4) | (lo >> 60);
        lo <<= 4;
        int nib = int((b >> shift) & 15);
        lo ^= tab_lo[nib];
        hi ^= tab_hi[nib];
    }
}

inline uint64_t reduce(uint64_t hi, uint64_t lo) {
    // Fold the high word twice through the sparse modulus.
    uint64_t t = hi ^ (hi >> 63) ^ (hi >> 61) ^ (hi >> 60);
    lo ^= t ^ (t << 1) ^ (t << 3) ^ (t << 4);
    return lo;
}

inline uint64_t mul(uint64_t a, uint64_t b) {
    uint64_t hi, lo;
    clmul(a, b, hi, lo);
    return reduce(hi, lo);
}

// Reference bit-by-bit multiply, kept as an independent oracle for tests.
inline uint64_t mul_slow(uint64_t a, uint64_t b) {
    uint64_t acc = 0;
    for (int i = 0; i < 64; i++) {
        if ((b >> i) & 1) acc ^= a;
        uint64_t top = a >> 63;
        a <<= 1;
        if (top) a ^= kReduction;
    }
    return acc;
}

}  // namespace gf64

// GF(2^8) with the AES polynomial x^8 + x^4 + x^3 + x + 1. Small enough that
// the full hash family over it can be enumerated in tests.
namespace gf256 {

inline uint8_t mul(uint8_t a, uint8_t b) {
    uint16_t aa = a, acc = 0;
    for (int i = 0; i < 8; i++) {
        if ((b >> i) & 1) acc ^= aa;
        aa <<= 1;
        if (aa & 0x100) aa ^= 0x11b;
    }
    return uint8_t(acc);
}

}  // namespace gf256

}  // namespace czk
