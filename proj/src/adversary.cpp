#include "czk/adversary.hpp"

#include <sstream>

#include "czk/sha256.hpp"

namespace czk::adversary {

const char* reply_kind_name(ReplyKind k) {
    switch (k) {
        case ReplyKind::NextQ: return "next_q";
        case ReplyKind::NextS: return "next_s";
        case ReplyKind::Accept: return "accept";
        case ReplyKind::Abort: return "abort";
        case ReplyKind::QueryError: return "query_error";
    }
    return "?";
}

Bytes history_bytes(const Instance& x, const std::vector<BlockMsg>& qs,
                    const std::vector<BlockMsg>& rs, size_t prior_levels) {
    Bytes h;
    append_framed(h, x.input_x);
    for (size_t i = 0; i < prior_levels; i++) {
        append_block(h, qs[i]);
        append_block(h, rs[i]);
    }
    return h;
}

void VerifierHooks::on_query(const PrefixQuery&) {}

void VerifierHooks::on_level(int, const Bytes&, BlockTape&, BlockMsg&) {}

BlockMsg VerifierHooks::second_challenge(const ScheduleConfig& cfg, const Instance& x, int,
                                         const Bytes&, const BlockTape& R, const BlockMsg&,
                                         const BlockMsg& r) {
    return block_second_challenge(*cfg.protocol, x, R, r);
}

void VerifierHooks::on_resolved(int, const Bytes&, const BlockMsg&, const BlockMsg&) {}

Bytes encode_prefix(const PrefixQuery& prefix) {
    Bytes b;
    append_u32le(b, uint32_t(prefix.rs.size()));
    for (const auto& blk : prefix.rs) append_block(b, blk);
    append_u32le(b, uint32_t(prefix.ts.size()));
    for (const auto& blk : prefix.ts) append_block(b, blk);
    return b;
}

AdversaryOracle::AdversaryOracle(ScheduleConfig cfg, Instance x, long step_cap, bool memoize)
    : cfg_(std::move(cfg)), x_(std::move(x)), cap_(step_cap), memoize_(memoize) {
    if (cfg_.k < 1 || cfg_.m < 1) throw ConfigError("schedule needs k >= 1, m >= 1");
    if (!cfg_.protocol || !cfg_.hash) throw ConfigError("schedule config missing protocol or hash");
}

std::optional<VerifierReply> AdversaryOracle::validate(const PrefixQuery& prefix) const {
    auto bad = [](std::string why) {
        VerifierReply r;
        r.kind = ReplyKind::QueryError;
        r.error = std::move(why);
        return r;
    };
    const size_t p = prefix.rs.size();
    if (p > size_t(cfg_.k)) return bad("more r-blocks than sessions");
    if (!prefix.ts.empty() && p < size_t(cfg_.k))
        return bad("t-blocks before the creation phase ended");
    if (prefix.ts.size() > size_t(cfg_.k)) return bad("more t-blocks than sessions");
    for (const auto& blk : prefix.rs)
        if (int(blk.size()) != cfg_.m) return bad("r-block tuple length mismatch");
    for (const auto& blk : prefix.ts)
        if (int(blk.size()) != cfg_.m) return bad("t-block tuple length mismatch");
    return std::nullopt;
}

VerifierReply AdversaryOracle::compute(const PrefixQuery& prefix,
                                       std::vector<LevelDigests>& levels) {
    const int k = cfg_.k;
    const int m = cfg_.m;
    auto bad = [](std::string why) {
        VerifierReply r;
        r.kind = ReplyKind::QueryError;
        r.error = std::move(why);
        return r;
    };

    const size_t p = prefix.rs.size();
    if (hooks_) hooks_->on_query(prefix);

    const int tape_bits = cfg_.protocol->tape_bits(x_);
    const size_t want_levels = std::min(p + 1, size_t(k));
    std::vector<BlockMsg> qs;
    std::vector<BlockTape> Rs;
    qs.reserve(want_levels);
    Rs.reserve(want_levels);
    for (size_t i = 0; i < want_levels; i++) {
        Bytes hist = history_bytes(x_, qs, prefix.rs, i);
        Bytes raw = cfg_.hash->evaluate(hist, m * tape_bits);
        BlockTape R = hashfam::block_tapes(raw, m, tape_bits);
        BlockMsg q = block_first_challenge(*cfg_.protocol, x_, R);
        if (hooks_) hooks_->on_level(int(i) + 1, hist, R, q);

        // collision bookkeeping: identical coins at distinct histories
        Bytes rdig = sha256_bytes(raw);
        Bytes hdig = sha256_bytes(hist);
        auto [it, fresh] = seen_R_.emplace(rdig, hdig);
        if (!fresh && it->second != hdig) collisions_++;

        Bytes qb;
        append_block(qb, q);
        levels.push_back(LevelDigests{hist, rdig, sha256_bytes(qb)});
        qs.push_back(std::move(q));
        Rs.push_back(std::move(R));
    }

    if (p < size_t(k)) {
        VerifierReply r;
        r.kind = ReplyKind::NextQ;
        r.session = int(p) + 1;
        r.msg = qs.back();
        return r;
    }

    VerifierHooks default_hooks;
    VerifierHooks* hooks = hooks_ ? hooks_ : &default_hooks;

    // Resolution phase: consume the t-blocks top of stack first (session k
    // downward), abort on the first rejecting block.
    for (size_t idx = 0; idx < prefix.ts.size(); idx++) {
        int lev = k - int(idx);
        const BlockMsg& r_blk = prefix.rs[size_t(lev - 1)];
        const BlockMsg& t_blk = prefix.ts[idx];
        BlockMsg s_blk = hooks->second_challenge(cfg_, x_, lev, levels[size_t(lev - 1)].history,
                                                 Rs[size_t(lev - 1)], qs[size_t(lev - 1)], r_blk);
        if (!block_accept(*cfg_.protocol, x_, qs[size_t(lev - 1)], r_blk, s_blk, t_blk)) {
            if (idx + 1 < prefix.ts.size()) return bad("prefix extends past an abort");
            VerifierReply r;
            r.kind = ReplyKind::Abort;
            r.session = lev;
            return r;
        }
        hooks->on_resolved(lev, levels[size_t(lev - 1)].history, r_blk, t_blk);
    }

    if (prefix.ts.size() == size_t(k)) {
        VerifierReply r;
        r.kind = ReplyKind::Accept;
        r.session = 1;
        return r;
    }

    int lev = k - int(prefix.ts.size());
    VerifierReply r;
    r.kind = ReplyKind::NextS;
    r.session = lev;
    r.msg = hooks->second_challenge(cfg_, x_, lev, levels[size_t(lev - 1)].history,
                                    Rs[size_t(lev - 1)], qs[size_t(lev - 1)],
                                    prefix.rs[size_t(lev - 1)]);
    return r;
}

VerifierReply AdversaryOracle::query(const PrefixQuery& prefix) {
    if (auto err = validate(prefix)) return *err;  // not counted, not traced

    if (cap_ > 0 && steps_ >= cap_) throw CapExhausted{};

    Bytes key;
    if (memoize_) {
        key = encode_prefix(prefix);
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            steps_++;
            trace_.push_back(TraceRecord{prefix, it->second.first.kind, it->second.first.session,
                                         it->second.second});
            return it->second.first;
        }
    }

    std::vector<LevelDigests> levels;
    VerifierReply reply = compute(prefix, levels);
    // one grammar violation is only detectable mid-walk: a prefix that
    // extends past an abort
    if (reply.kind == ReplyKind::QueryError) return reply;
    steps_++;
    trace_.push_back(TraceRecord{prefix, reply.kind, reply.session, levels});
    if (memoize_) memo_.emplace(std::move(key), std::make_pair(reply, std::move(levels)));
    return reply;
}

std::string AdversaryOracle::trace_log() const {
    std::ostringstream out;
    for (const auto& rec : trace_) {
        out << to_hex(sha256_bytes(encode_prefix(rec.prefix), 8)) << ' '
            << reply_kind_name(rec.kind) << ' ' << rec.session << '\n';
    }
    return out.str();
}

}  // namespace czk::adversary
