#include "czk/channel.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace czk::channel {

InProcessChannel::InProcessChannel(const Protocol& p, Instance x, Tape R)
    : proto_(p), x_(std::move(x)), R_(std::move(R)) {
    proto_.check_tape(x_, R_);
    q_ = proto_.first_challenge(x_, R_);
}

Bytes InProcessChannel::respond_r(const Bytes& r) {
    if (r_)
        throw ProtocolViolation("second r on the honest channel: the verifier does not rewind");
    r_ = r;
    s_ = proto_.second_challenge(x_, R_, r);
    return *s_;
}

bool InProcessChannel::final_t(const Bytes& t) {
    if (!r_ || !s_) throw ProtocolViolation("t before r on the honest channel");
    if (verdict_) throw ProtocolViolation("second t on the honest channel");
    verdict_ = proto_.accept(x_, q_, *r_, *s_, t);
    return *verdict_;
}

Bytes encode_frame(ByteView msg) {
    Bytes out;
    out.reserve(msg.size() + 4);
    uint32_t len = uint32_t(msg.size());
    out.push_back(uint8_t(len >> 24));
    out.push_back(uint8_t(len >> 16));
    out.push_back(uint8_t(len >> 8));
    out.push_back(uint8_t(len));
    append(out, msg);
    return out;
}

void write_frame(int fd, ByteView msg) {
    Bytes frame = encode_frame(msg);
    size_t off = 0;
    while (off < frame.size()) {
        ssize_t n = ::write(fd, frame.data() + off, frame.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error(std::string("channel write: ") + std::strerror(errno));
        }
        off += size_t(n);
    }
}

namespace {
bool read_exact(int fd, uint8_t* buf, size_t n) {
    size_t off = 0;
    while (off < n) {
        ssize_t got = ::read(fd, buf + off, n - off);
        if (got < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error(std::string("channel read: ") + std::strerror(errno));
        }
        if (got == 0) return false;  // peer closed
        off += size_t(got);
    }
    return true;
}
}  // namespace

std::optional<Bytes> read_frame(int fd) {
    uint8_t hdr[4];
    if (!read_exact(fd, hdr, 4)) return std::nullopt;
    uint32_t len = (uint32_t(hdr[0]) << 24) | (uint32_t(hdr[1]) << 16) | (uint32_t(hdr[2]) << 8) |
                   uint32_t(hdr[3]);
    if (len > (1u << 24)) throw std::runtime_error("channel frame too large");
    Bytes msg(len);
    if (len > 0 && !read_exact(fd, msg.data(), len)) return std::nullopt;
    return msg;
}

SocketChannel::SocketChannel(int fd) : fd_(fd) {
    auto q = read_frame(fd_);
    if (!q) throw std::runtime_error("socket channel: no first challenge");
    q_ = std::move(*q);
}

Bytes SocketChannel::respond_r(const Bytes& r) {
    if (r_sent_)
        throw ProtocolViolation("second r on the honest channel: the verifier does not rewind");
    r_sent_ = true;
    write_frame(fd_, r);
    auto s = read_frame(fd_);
    if (!s) throw std::runtime_error("socket channel: no second challenge");
    return *s;
}

bool SocketChannel::final_t(const Bytes& t) {
    if (!r_sent_) throw ProtocolViolation("t before r on the honest channel");
    if (verdict_) throw ProtocolViolation("second t on the honest channel");
    write_frame(fd_, t);
    auto v = read_frame(fd_);
    if (!v || v->size() != 1) throw std::runtime_error("socket channel: no verdict");
    verdict_ = ((*v)[0] != 0);
    return *verdict_;
}

bool serve_channel(int fd, const Protocol& p, const Instance& x, const Tape& R) {
    InProcessChannel inner(p, x, R);
    write_frame(fd, inner.first_challenge());
    auto r = read_frame(fd);
    if (!r) throw std::runtime_error("serve_channel: peer closed before r");
    Bytes s = inner.respond_r(*r);
    write_frame(fd, s);
    auto t = read_frame(fd);
    if (!t) throw std::runtime_error("serve_channel: peer closed before t");
    bool verdict = inner.final_t(*t);
    uint8_t vb = verdict ? 1 : 0;
    write_frame(fd, ByteView(&vb, 1));
    return verdict;
}

}  // namespace czk::channel
