#pragma once

#include <memory>
#include <vector>

#include "czk/bytes.hpp"

namespace czk {

// Common input x: opaque canonical statement bytes plus its size parameter n.
struct Instance {
    Bytes input_x;
    int size_n = 1;
};

// Per-copy verifier coins: a fixed-length bit string. Unused bits of the last
// byte are zero so tapes compare and hash canonically.
struct Tape {
    Bytes bytes;
    int bit_len = 0;

    static Tape from_bits(Bytes b, int bits) {
        Tape t{std::move(b), bits};
        t.canonicalize();
        return t;
    }

    void canonicalize() {
        size_t need = size_t((bit_len + 7) / 8);
        bytes.resize(need, 0);
        int spare = int(need * 8) - bit_len;
        if (spare > 0 && need > 0) bytes.back() &= uint8_t(0xff >> spare);
    }

    bool operator==(const Tape& o) const = default;
};

// One 4-message conversation, possibly a prefix (q before r before s before t).
struct Conversation {
    Bytes q, r, s, t;
};

// m parallel copies of a message.
using BlockMsg = std::vector<Bytes>;

struct BlockTape {
    std::vector<Tape> copies;
    int m() const { return int(copies.size()); }
};

struct BlockConversation {
    BlockMsg q, r, s, t;
};

// A 4-message, verifier-first, conversation-based interactive proof.
// Acceptance is decidable from the conversation alone: accept() never sees R.
class Protocol {
public:
    virtual ~Protocol() = default;

    // Declared coin budget per copy for inputs of this size.
    virtual int tape_bits(const Instance& x) const = 0;

    // q(x, R). Wrong tape length is a configuration error.
    virtual Bytes first_challenge(const Instance& x, const Tape& R) const = 0;

    // s(x, R, r). A malformed r folds into a reject-equivalent sentinel, never
    // an exception: the verifier treats the conversation as failing.
    virtual Bytes second_challenge(const Instance& x, const Tape& R, const Bytes& r) const = 0;

    // accept(x, q, r, s, t): total predicate, malformed input is false.
    virtual bool accept(const Instance& x, const Bytes& q, const Bytes& r, const Bytes& s,
                        const Bytes& t) const = 0;

    void check_tape(const Instance& x, const Tape& R) const {
        if (R.bit_len != tape_bits(x) || R.bytes.size() != size_t((R.bit_len + 7) / 8))
            throw ConfigError("tape length does not match protocol coin budget");
    }
};

// Coordinate-wise lifting to m-blocks.

inline BlockMsg block_first_challenge(const Protocol& p, const Instance& x, const BlockTape& R) {
    BlockMsg out;
    out.reserve(R.copies.size());
    for (const auto& tape : R.copies) out.push_back(p.first_challenge(x, tape));
    return out;
}

inline BlockMsg block_second_challenge(const Protocol& p, const Instance& x, const BlockTape& R,
                                       const BlockMsg& r) {
    if (r.size() != R.copies.size()) throw ConfigError("block_second_challenge: tuple length mismatch");
    BlockMsg out;
    out.reserve(r.size());
    for (size_t i = 0; i < r.size(); i++) out.push_back(p.second_challenge(x, R.copies[i], r[i]));
    return out;
}

// Conjunction over all m copies.
inline bool block_accept(const Protocol& p, const Instance& x, const BlockMsg& q, const BlockMsg& r,
                         const BlockMsg& s, const BlockMsg& t) {
    size_t m = q.size();
    if (r.size() != m || s.size() != m || t.size() != m)
        throw ConfigError("block_accept: tuple length mismatch");
    for (size_t i = 0; i < m; i++)
        if (!p.accept(x, q[i], r[i], s[i], t[i])) return false;
    return true;
}

}  // namespace czk
