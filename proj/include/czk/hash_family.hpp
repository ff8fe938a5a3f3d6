#pragma once

#include <map>
#include <optional>
#include <vector>

#include "czk/bytes.hpp"
#include "czk/protocol.hpp"

namespace czk::hashfam {

// Anything the adversarial verifier can draw coins from.
class HashView {
public:
    virtual ~HashView() = default;
    virtual Bytes evaluate(ByteView input, int out_bits) const = 0;
};

enum class HashMode { PrgSeeded, Exact64, Micro8 };

// One member H of the family. Output length requests are served by chunked
// evaluation with a chunk-index salt appended to the input, so one member
// serves every (m, tape) shape.
//
//   PrgSeeded — chunks come from a short seed through SHA-256; the default.
//   Exact64   — degree-(t-1) polynomial over GF(2^64), one evaluation per
//               64-bit chunk at a digest-derived point. Exactly t-wise
//               independent at distinct points.
//   Micro8    — degree-(t-1) polynomial over GF(2^8); inputs are single bytes
//               used directly as the point. Small enough to enumerate the
//               whole family in tests.
class HashMember final : public HashView {
public:
    static HashMember prg(Bytes seed, int t);
    static HashMember exact64(std::vector<uint64_t> coeffs);
    static HashMember micro8(std::vector<uint8_t> coeffs);
    static HashMember sample(uint64_t seed, int t, HashMode mode = HashMode::PrgSeeded);

    Bytes evaluate(ByteView input, int out_bits) const override;

    HashMode mode() const { return mode_; }
    int independence_degree() const { return t_; }

    Bytes serialize() const;
    static std::optional<HashMember> deserialize(ByteView data);

private:
    HashMember() = default;
    HashMode mode_ = HashMode::PrgSeeded;
    int t_ = 0;
    Bytes seed_;
    std::vector<uint64_t> coeffs64_;
    std::vector<uint8_t> coeffs8_;
};

// Point override wrapper: behaves like the base member except that on one
// recorded input the j-th tape slot of the output is a fixed replacement.
// The base is copied, never modified.
class SplicedHash final : public HashView {
public:
    SplicedHash(HashMember base, int m, int tape_bits);

    // One splice per attempt: a second override on the same input is an error.
    void add_override(ByteView input, int coordinate_j, Tape replacement);

    Bytes evaluate(ByteView input, int out_bits) const override;

    const HashMember& base() const { return base_; }

private:
    HashMember base_;
    int m_;
    int tape_bits_;
    std::map<Bytes, std::pair<int, Tape>> overrides_;
};

// splice(Rvec, j, R): the m-tuple equal to Rvec everywhere except slot j.
SplicedHash splice_override(const HashMember& base, int m, int tape_bits, ByteView input,
                            int coordinate_j, Tape replacement);

// Slices a raw hash output into the m-tuple-of-tapes interpretation.
BlockTape block_tapes(ByteView raw, int m, int tape_bits);

}  // namespace czk::hashfam
