#include "doctest.h"

#include <algorithm>

#include "czk/adversary.hpp"
#include "czk/gi.hpp"
#include "czk/hash_family.hpp"
#include "czk/rng.hpp"

using namespace czk;
using namespace czk::adversary;

namespace {

struct Fixture {
    gi::GiProtocol proto;
    gi::GeneratedInstance inst;
    Instance x;
    hashfam::HashMember H;
    ScheduleConfig cfg;

    explicit Fixture(int k, int m, uint64_t seed = 5)
        : inst(gi::gen_instance(4, true, seed)),
          x(gi::make_instance(inst.pair)),
          H(hashfam::HashMember::sample(seed, 64, hashfam::HashMode::PrgSeeded)),
          cfg{k, m, &proto, &H} {}
};

// plays the honest prover through the schedule, returning every prefix asked
struct HonestDriver {
    Fixture& f;
    Rng coins{314};

    VerifierReply drive(AdversaryOracle& oracle, PrefixQuery& pf) {
        const int k = oracle.config().k, m = oracle.config().m;
        std::vector<std::vector<gi::ProverCopyState>> states(size_t(k));
        VerifierReply rep = oracle.query(pf);
        for (int i = 1; i <= k; i++) {
            BlockMsg rb;
            for (int c = 0; c < m; c++) {
                auto [r, st] = gi::prover_commit(f.inst.pair, rep.msg[size_t(c)],
                                                 *f.inst.witness, coins);
                rb.push_back(r);
                states[size_t(i - 1)].push_back(st);
            }
            pf.rs.push_back(rb);
            rep = oracle.query(pf);
        }
        for (int lev = k; lev >= 1; lev--) {
            BlockMsg tb;
            for (int c = 0; c < m; c++)
                tb.push_back(gi::prover_respond(f.inst.pair, states[size_t(lev - 1)][size_t(c)],
                                                *f.inst.witness, rep.msg[size_t(c)]));
            pf.ts.push_back(tb);
            rep = oracle.query(pf);
        }
        return rep;
    }
};

}  // namespace

TEST_CASE("the empty prefix answers q1 from H(x)") {
    Fixture f(3, 2);
    AdversaryOracle oracle(f.cfg, f.x, -1);
    auto rep = oracle.query(PrefixQuery{});
    REQUIRE(rep.kind == ReplyKind::NextQ);
    CHECK(rep.session == 1);
    // Eq-1 at the empty history: coins are H(x) directly
    Bytes hist = history_bytes(f.x, {}, {}, 0);
    Bytes raw = f.H.evaluate(hist, 2 * f.proto.tape_bits(f.x));
    BlockTape R = hashfam::block_tapes(raw, 2, f.proto.tape_bits(f.x));
    CHECK(rep.msg == block_first_challenge(f.proto, f.x, R));

    auto rep2 = oracle.query(PrefixQuery{});
    CHECK(rep2.msg == rep.msg);  // deterministic V repeats the same response
}

TEST_CASE("an honest prover walks the schedule to Accept") {
    for (int k : {1, 2, 3}) {
        for (int m : {1, 2}) {
            Fixture f(k, m);
            AdversaryOracle oracle(f.cfg, f.x, -1);
            HonestDriver d{f};
            PrefixQuery pf;
            auto rep = d.drive(oracle, pf);
            CHECK(rep.kind == ReplyKind::Accept);
            CHECK(oracle.steps() == 2 * k + 1);
        }
    }
}

TEST_CASE("one rejected block aborts without emitting the next challenge") {
    Fixture f(2, 1);
    AdversaryOracle oracle(f.cfg, f.x, -1);
    HonestDriver d{f};
    PrefixQuery pf;
    d.drive(oracle, pf);  // fills pf with a valid complete prefix

    // corrupt t2 (the first resolution message)
    PrefixQuery bad = pf;
    bad.ts.resize(1);
    bad.ts[0][0] = Bytes{1, 2, 3};
    auto rep = oracle.query(bad);
    CHECK(rep.kind == ReplyKind::Abort);
    CHECK(rep.session == 2);

    // a prefix that extends past the abort is a grammar violation
    PrefixQuery past = pf;
    past.ts[0][0] = Bytes{1, 2, 3};
    auto rep2 = oracle.query(past);
    CHECK(rep2.kind == ReplyKind::QueryError);
}

TEST_CASE("second challenges only flow after the child session resolved") {
    Fixture f(2, 1);
    AdversaryOracle oracle(f.cfg, f.x, -1);
    HonestDriver d{f};
    PrefixQuery pf;
    d.drive(oracle, pf);

    PrefixQuery creation;
    creation.rs = pf.rs;
    auto rep = oracle.query(creation);
    CHECK(rep.kind == ReplyKind::NextS);
    CHECK(rep.session == 2);  // s2 first, never s1

    PrefixQuery one_t;
    one_t.rs = pf.rs;
    one_t.ts = {pf.ts[0]};
    auto rep2 = oracle.query(one_t);
    CHECK(rep2.kind == ReplyKind::NextS);
    CHECK(rep2.session == 1);
}

TEST_CASE("grammar violations are query errors and cost no steps") {
    Fixture f(2, 2);
    AdversaryOracle oracle(f.cfg, f.x, -1);

    PrefixQuery early_t;
    early_t.rs = {{Bytes{1}, Bytes{2}}};
    early_t.ts = {{Bytes{1}, Bytes{2}}};
    CHECK(oracle.query(early_t).kind == ReplyKind::QueryError);

    PrefixQuery deep;
    deep.rs = std::vector<BlockMsg>(3, BlockMsg{Bytes{1}, Bytes{2}});
    CHECK(oracle.query(deep).kind == ReplyKind::QueryError);

    PrefixQuery skew;
    skew.rs = {{Bytes{1}}};  // tuple of 1 in an m=2 schedule
    CHECK(oracle.query(skew).kind == ReplyKind::QueryError);

    CHECK(oracle.steps() == 0);
    CHECK(oracle.trace().empty());
}

TEST_CASE("rewinding is just asking a different prefix") {
    for (bool memoize : {true, false}) {
        Fixture f(2, 1);
        AdversaryOracle oracle(f.cfg, f.x, -1, memoize);
        HonestDriver d{f};
        PrefixQuery pf;
        d.drive(oracle, pf);

        // collect a family of prefixes: every creation-phase cut plus a fresh r1
        std::vector<PrefixQuery> prefixes;
        for (size_t cut = 0; cut <= pf.rs.size(); cut++) {
            PrefixQuery p;
            p.rs = std::vector<BlockMsg>(pf.rs.begin(), pf.rs.begin() + long(cut));
            prefixes.push_back(p);
        }
        PrefixQuery fresh;
        Rng coins(8);
        auto q1 = oracle.query(PrefixQuery{});
        auto [r, st] = gi::prover_commit(f.inst.pair, q1.msg[0], *f.inst.witness, coins);
        fresh.rs = {{r}};
        prefixes.push_back(fresh);

        std::vector<std::string> first;
        for (const auto& p : prefixes) {
            auto rep = oracle.query(p);
            Bytes enc;
            append_block(enc, rep.msg);
            first.push_back(std::string(reply_kind_name(rep.kind)) + to_hex(enc));
        }
        Rng order(99);
        for (int round = 0; round < 50; round++) {
            std::vector<size_t> idx(prefixes.size());
            for (size_t i = 0; i < idx.size(); i++) idx[i] = i;
            for (size_t i = idx.size(); i > 1; i--)
                std::swap(idx[i - 1], idx[size_t(order.below(i))]);
            for (size_t i : idx) {
                auto rep = oracle.query(prefixes[i]);
                Bytes enc;
                append_block(enc, rep.msg);
                CHECK(std::string(reply_kind_name(rep.kind)) + to_hex(enc) == first[i]);
            }
        }
    }
}

TEST_CASE("a spliced hash plants the replacement tape in one slot") {
    Fixture f(2, 3);
    int tb = f.proto.tape_bits(f.x);
    Rng rng(17);
    Tape rep_tape = Tape::from_bits(rng.bytes(size_t((tb + 7) / 8)), tb);
    Bytes hist = history_bytes(f.x, {}, {}, 0);
    auto spliced = hashfam::splice_override(f.H, 3, tb, hist, 2, rep_tape);
    ScheduleConfig cfg2{2, 3, &f.proto, &spliced};
    AdversaryOracle oracle(cfg2, f.x, -1);
    auto rep = oracle.query(PrefixQuery{});
    REQUIRE(rep.kind == ReplyKind::NextQ);
    CHECK(rep.msg[1] == f.proto.first_challenge(f.x, rep_tape));
    // other coordinates equal the unspliced answers
    AdversaryOracle plain(f.cfg, f.x, -1);
    auto rep0 = plain.query(PrefixQuery{});
    CHECK(rep.msg[0] == rep0.msg[0]);
    CHECK(rep.msg[2] == rep0.msg[2]);
}

TEST_CASE("the step cap throws once exhausted") {
    Fixture f(2, 1);
    AdversaryOracle oracle(f.cfg, f.x, 2);
    (void)oracle.query(PrefixQuery{});
    (void)oracle.query(PrefixQuery{});
    CHECK_THROWS_AS((void)oracle.query(PrefixQuery{}), CapExhausted);
    CHECK(oracle.steps() == 2);

    AdversaryOracle zero(f.cfg, f.x, 0);
    CHECK_THROWS_AS((void)zero.query(PrefixQuery{}), CapExhausted);
}

TEST_CASE("trace log lines carry prefix digest, kind and session") {
    Fixture f(1, 1);
    AdversaryOracle oracle(f.cfg, f.x, -1);
    (void)oracle.query(PrefixQuery{});
    std::string log = oracle.trace_log();
    CHECK(log.find("next_q 1") != std::string::npos);
    CHECK(log.size() > 20);
}
