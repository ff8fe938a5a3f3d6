#pragma once

#include <cstdint>
#include <string>

#include "czk/bytes.hpp"
#include "czk/sha256.hpp"

namespace czk {

// Deterministic RNG with portable output. std::uniform_int_distribution is not
// pinned by the standard, so bounded draws are done by rejection here; reports
// must be byte-identical across toolchains for a fixed master seed.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        // splitmix64
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n), n >= 1.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    int bit() { return int(next_u64() & 1); }

    double unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    Bytes bytes(size_t n) {
        Bytes out(n);
        size_t i = 0;
        while (i < n) {
            uint64_t x = next_u64();
            for (int b = 0; b < 8 && i < n; b++) out[i++] = uint8_t(x >> (8 * b));
        }
        return out;
    }

    uint64_t fork_seed() { return next_u64(); }

private:
    uint64_t state_;
};

// Domain-separated seed derivation: one master seed fans out into independent
// per-purpose, per-index streams.
inline uint64_t derive_seed(uint64_t master, const std::string& domain, uint64_t index) {
    Bytes buf;
    append_u64le(buf, master);
    buf.insert(buf.end(), domain.begin(), domain.end());
    append_u64le(buf, index);
    return sha256_u64(buf);
}

}  // namespace czk
