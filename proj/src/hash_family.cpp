#include "czk/hash_family.hpp"

#include "czk/gf.hpp"
#include "czk/sha256.hpp"

namespace czk::hashfam {

namespace {

const char* kPrgTag = "czk.hf.prg.v1";
const char* kPointTag = "czk.hf.pt.v1";
const char* kCoefTag = "czk.hf.coef.v1";

Bytes chunk_input(const char* tag, ByteView seed, ByteView input, uint32_t chunk) {
    Bytes buf(tag, tag + std::char_traits<char>::length(tag));
    append_framed(buf, seed);
    append_framed(buf, input);
    append_u32le(buf, chunk);
    return buf;
}

}  // namespace

HashMember HashMember::prg(Bytes seed, int t) {
    HashMember h;
    h.mode_ = HashMode::PrgSeeded;
    h.t_ = t;
    h.seed_ = std::move(seed);
    return h;
}

HashMember HashMember::exact64(std::vector<uint64_t> coeffs) {
    if (coeffs.empty()) throw ConfigError("exact64 member needs at least one coefficient");
    HashMember h;
    h.mode_ = HashMode::Exact64;
    h.t_ = int(coeffs.size());
    h.coeffs64_ = std::move(coeffs);
    return h;
}

HashMember HashMember::micro8(std::vector<uint8_t> coeffs) {
    if (coeffs.empty()) throw ConfigError("micro8 member needs at least one coefficient");
    HashMember h;
    h.mode_ = HashMode::Micro8;
    h.t_ = int(coeffs.size());
    h.coeffs8_ = std::move(coeffs);
    return h;
}

HashMember HashMember::sample(uint64_t seed, int t, HashMode mode) {
    if (t < 1) throw ConfigError("independence degree must be >= 1");
    switch (mode) {
        case HashMode::PrgSeeded: {
            Bytes s;
            append_u64le(s, seed);
            return prg(std::move(s), t);
        }
        case HashMode::Exact64: {
            auto coeffs = std::vector<uint64_t>(size_t(t), 0);
            Bytes base(kCoefTag, kCoefTag + 14);
            append_u64le(base, seed);
            for (int i = 0; i < t; i++) {
                Bytes buf = base;
                append_u32le(buf, uint32_t(i));
                coeffs[size_t(i)] = sha256_u64(buf);
            }
            return exact64(std::move(coeffs));
        }
        case HashMode::Micro8: {
            auto coeffs = std::vector<uint8_t>(size_t(t), 0);
            Bytes base(kCoefTag, kCoefTag + 14);
            append_u64le(base, seed);
            for (int i = 0; i < t; i++) {
                Bytes buf = base;
                append_u32le(buf, uint32_t(i));
                coeffs[size_t(i)] = sha256_bytes(buf, 1)[0];
            }
            return micro8(std::move(coeffs));
        }
    }
    throw ConfigError("unknown hash mode");
}

Bytes HashMember::evaluate(ByteView input, int out_bits) const {
    if (out_bits < 0) throw ConfigError("negative output length");
    size_t out_bytes = size_t((out_bits + 7) / 8);
    Bytes out;
    out.reserve(out_bytes);
    switch (mode_) {
        case HashMode::PrgSeeded: {
            for (uint32_t c = 0; out.size() < out_bytes; c++) {
                auto block = sha256(chunk_input(kPrgTag, seed_, input, c));
                for (uint8_t b : block) {
                    if (out.size() == out_bytes) break;
                    out.push_back(b);
                }
            }
            break;
        }
        case HashMode::Exact64: {
            for (uint32_t c = 0; out.size() < out_bytes; c++) {
                uint64_t point = sha256_u64(chunk_input(kPointTag, {}, input, c));
                uint64_t acc = 0;
                for (size_t i = coeffs64_.size(); i-- > 0;)
                    acc = gf64::mul(acc, point) ^ coeffs64_[i];
                for (int b = 0; b < 8 && out.size() < out_bytes; b++)
                    out.push_back(uint8_t(acc >> (8 * b)));
            }
            break;
        }
        case HashMode::Micro8: {
            if (input.size() != 1)
                throw ConfigError("micro8 members take single-byte inputs");
            if (out_bits > 8) throw ConfigError("micro8 members emit at most 8 bits");
            uint8_t point = input[0];
            uint8_t acc = 0;
            for (size_t i = coeffs8_.size(); i-- > 0;)
                acc = uint8_t(gf256::mul(acc, point) ^ coeffs8_[i]);
            out.push_back(acc);
            break;
        }
    }
    int spare = int(out_bytes * 8) - out_bits;
    if (spare > 0 && !out.empty()) out.back() &= uint8_t(0xff >> spare);
    return out;
}

Bytes HashMember::serialize() const {
    Bytes b;
    b.push_back(uint8_t(mode_));
    append_u32le(b, uint32_t(t_));
    switch (mode_) {
        case HashMode::PrgSeeded:
            append_framed(b, seed_);
            break;
        case HashMode::Exact64:
            for (uint64_t c : coeffs64_) append_u64le(b, c);
            break;
        case HashMode::Micro8:
            append(b, coeffs8_);
            break;
    }
    return b;
}

std::optional<HashMember> HashMember::deserialize(ByteView data) {
    if (data.size() < 5) return std::nullopt;
    auto mode = HashMode(data[0]);
    uint32_t t = 0;
    for (int i = 0; i < 4; i++) t |= uint32_t(data[1 + i]) << (8 * i);
    ByteView rest = data.subspan(5);
    switch (mode) {
        case HashMode::PrgSeeded: {
            if (rest.size() < 4) return std::nullopt;
            uint32_t len = 0;
            for (int i = 0; i < 4; i++) len |= uint32_t(rest[i]) << (8 * i);
            if (rest.size() != 4 + size_t(len)) return std::nullopt;
            return prg(Bytes(rest.begin() + 4, rest.end()), int(t));
        }
        case HashMode::Exact64: {
            if (rest.size() != size_t(t) * 8 || t == 0) return std::nullopt;
            std::vector<uint64_t> coeffs(t);
            for (uint32_t i = 0; i < t; i++) coeffs[i] = load_u64le(rest, size_t(i) * 8);
            return exact64(std::move(coeffs));
        }
        case HashMode::Micro8: {
            if (rest.size() != size_t(t) || t == 0) return std::nullopt;
            return micro8(std::vector<uint8_t>(rest.begin(), rest.end()));
        }
    }
    return std::nullopt;
}

SplicedHash::SplicedHash(HashMember base, int m, int tape_bits)
    : base_(std::move(base)), m_(m), tape_bits_(tape_bits) {
    if (m < 1 || tape_bits < 1) throw ConfigError("SplicedHash: bad block shape");
}

void SplicedHash::add_override(ByteView input, int coordinate_j, Tape replacement) {
    if (coordinate_j < 1 || coordinate_j > m_)
        throw ConfigError("splice coordinate out of range");
    if (replacement.bit_len != tape_bits_)
        throw ConfigError("splice replacement tape has wrong length");
    Bytes key(input.begin(), input.end());
    if (overrides_.count(key))
        throw ConfigError("duplicate splice override on the same input");
    overrides_.emplace(std::move(key), std::make_pair(coordinate_j, std::move(replacement)));
}

Bytes SplicedHash::evaluate(ByteView input, int out_bits) const {
    Bytes out = base_.evaluate(input, out_bits);
    auto it = overrides_.find(Bytes(input.begin(), input.end()));
    if (it == overrides_.end()) return out;
    int j = it->second.first;
    const Tape& rep = it->second.second;
    if (out_bits < j * tape_bits_)
        throw ConfigError("spliced evaluation shorter than the overridden slot");
    copy_bits(out, size_t(j - 1) * size_t(tape_bits_), rep.bytes, 0, size_t(tape_bits_));
    return out;
}

SplicedHash splice_override(const HashMember& base, int m, int tape_bits, ByteView input,
                            int coordinate_j, Tape replacement) {
    SplicedHash s(base, m, tape_bits);
    s.add_override(input, coordinate_j, std::move(replacement));
    return s;
}

BlockTape block_tapes(ByteView raw, int m, int tape_bits) {
    if (int(raw.size()) * 8 < m * tape_bits) throw ConfigError("hash output too short for block");
    BlockTape bt;
    bt.copies.reserve(size_t(m));
    for (int j = 0; j < m; j++) {
        Bytes tape((size_t(tape_bits) + 7) / 8, 0);
        copy_bits(tape, 0, raw, size_t(j) * size_t(tape_bits), size_t(tape_bits));
        bt.copies.push_back(Tape::from_bits(std::move(tape), tape_bits));
    }
    return bt;
}

}  // namespace czk::hashfam
