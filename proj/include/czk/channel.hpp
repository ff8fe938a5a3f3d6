#pragma once

#include <optional>

#include "czk/protocol.hpp"

namespace czk::channel {

// One live session of the original (single-copy) protocol, verifier side
// already committed to its coins. The q is on the table from the start; at
// most one r may ever cross — a second r is a hard protocol violation, not a
// recoverable error.
class HonestVerifierChannel {
public:
    virtual ~HonestVerifierChannel() = default;
    virtual const Bytes& first_challenge() const = 0;
    virtual Bytes respond_r(const Bytes& r) = 0;  // returns s
    virtual bool final_t(const Bytes& t) = 0;     // returns the verdict
    virtual bool r_sent() const = 0;
    virtual std::optional<bool> verdict() const = 0;
};

class InProcessChannel final : public HonestVerifierChannel {
public:
    InProcessChannel(const Protocol& p, Instance x, Tape R);

    const Bytes& first_challenge() const override { return q_; }
    Bytes respond_r(const Bytes& r) override;
    bool final_t(const Bytes& t) override;
    bool r_sent() const override { return r_.has_value(); }
    std::optional<bool> verdict() const override { return verdict_; }

private:
    const Protocol& proto_;
    Instance x_;
    Tape R_;
    Bytes q_;
    std::optional<Bytes> r_, s_;
    std::optional<bool> verdict_;
};

// Byte-framed message transport: 4-byte length prefix, big-endian, then the
// message bytes. Session layout on the wire: q, r, s, t, verdict (one byte).
Bytes encode_frame(ByteView msg);
void write_frame(int fd, ByteView msg);
std::optional<Bytes> read_frame(int fd);

// Client side of a channel spoken over a connected socket.
class SocketChannel final : public HonestVerifierChannel {
public:
    explicit SocketChannel(int fd);  // reads q eagerly

    const Bytes& first_challenge() const override { return q_; }
    Bytes respond_r(const Bytes& r) override;
    bool final_t(const Bytes& t) override;
    bool r_sent() const override { return r_sent_; }
    std::optional<bool> verdict() const override { return verdict_; }

private:
    int fd_;
    Bytes q_;
    bool r_sent_ = false;
    std::optional<bool> verdict_;
};

// Runs the verifier side of one session over a connected socket.
// Returns the verdict it sent.
bool serve_channel(int fd, const Protocol& p, const Instance& x, const Tape& R);

}  // namespace czk::channel
