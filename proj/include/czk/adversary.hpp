#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "czk/hash_family.hpp"
#include "czk/protocol.hpp"

namespace czk::adversary {

// k interleaved m-block sessions under the fixed nested schedule
//   q1 r1 q2 r2 ... qk rk sk tk s(k-1) t(k-1) ... s1 t1.
// The verifier is deterministic: per-session coins are the hash of the
// interaction history, and one rejected block aborts everything below.
struct ScheduleConfig {
    int k = 1;
    int m = 1;
    const Protocol* protocol = nullptr;
    const hashfam::HashView* hash = nullptr;
};

// Prover messages consistent with a schedule position: the r-blocks for
// sessions 1..p, then (only once p == k) the t-blocks for sessions k, k-1, ...
struct PrefixQuery {
    std::vector<BlockMsg> rs;
    std::vector<BlockMsg> ts;
};

enum class ReplyKind { NextQ, NextS, Accept, Abort, QueryError };

struct VerifierReply {
    ReplyKind kind = ReplyKind::QueryError;
    int session = 0;  // session index the reply pertains to
    BlockMsg msg;     // question content for NextQ / NextS
    std::string error;
};

const char* reply_kind_name(ReplyKind k);

// History that feeds the hash for session i: x and the (q, r) blocks of
// sessions 1..i-1, length-prefixed, in schedule order. s and t messages never
// enter the hash input; the schedule position disambiguates.
Bytes history_bytes(const Instance& x, const std::vector<BlockMsg>& qs,
                    const std::vector<BlockMsg>& rs, size_t prior_levels);

// Interception points for the live splicing prover. The default hooks
// reproduce the plain verifier exactly.
class VerifierHooks {
public:
    virtual ~VerifierHooks() = default;

    // A syntactically valid prefix is about to be answered.
    virtual void on_query(const PrefixQuery& prefix);

    // Called once per computed session level with its coins and question;
    // may rewrite them (the splice substitutes one coordinate of q).
    virtual void on_level(int level, const Bytes& history, BlockTape& R, BlockMsg& q);

    // Second challenge for an activated vertex (identified by its group
    // history plus its r-block).
    virtual BlockMsg second_challenge(const ScheduleConfig& cfg, const Instance& x, int level,
                                      const Bytes& history, const BlockTape& R, const BlockMsg& q,
                                      const BlockMsg& r);

    // A t-block for this vertex was accepted.
    virtual void on_resolved(int level, const Bytes& history, const BlockMsg& r,
                             const BlockMsg& t);
};

struct LevelDigests {
    Bytes history;
    Bytes R_digest;
    Bytes q_digest;
};

struct TraceRecord {
    PrefixQuery prefix;
    ReplyKind kind = ReplyKind::QueryError;
    int session = 0;
    std::vector<LevelDigests> levels;  // sessions 1..(levels computed)
};

// Thrown inside query() when the step cap is exhausted; the simulator run is
// truncated, not failed.
struct CapExhausted {};

// The black-box surface a simulator talks to. Pure prefix -> reply function
// underneath: rewinding is just asking a different prefix. Memoization and
// tracing never change answers. Syntactically invalid prefixes get a
// QueryError and do not count against the step cap.
class AdversaryOracle {
public:
    AdversaryOracle(ScheduleConfig cfg, Instance x, long step_cap = 0, bool memoize = true);

    VerifierReply query(const PrefixQuery& prefix);

    const ScheduleConfig& config() const { return cfg_; }
    const Instance& instance() const { return x_; }
    const std::vector<TraceRecord>& trace() const { return trace_; }
    long steps() const { return steps_; }
    long cap() const { return cap_; }
    int hash_collisions() const { return collisions_; }

    void set_hooks(VerifierHooks* hooks) { hooks_ = hooks; }

    // Serialized trace: one "prefix_digest kind session" line per query.
    std::string trace_log() const;

private:
    std::optional<VerifierReply> validate(const PrefixQuery& prefix) const;
    VerifierReply compute(const PrefixQuery& prefix, std::vector<LevelDigests>& levels);

    ScheduleConfig cfg_;
    Instance x_;
    long cap_;
    bool memoize_;
    VerifierHooks* hooks_ = nullptr;
    long steps_ = 0;
    int collisions_ = 0;
    std::vector<TraceRecord> trace_;
    std::map<Bytes, std::pair<VerifierReply, std::vector<LevelDigests>>> memo_;
    std::map<Bytes, Bytes> seen_R_;  // R-vector digest -> first history digest
};

Bytes encode_prefix(const PrefixQuery& prefix);

}  // namespace czk::adversary
