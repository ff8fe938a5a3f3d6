#include "doctest.h"

#include "czk/gi.hpp"
#include "czk/rng.hpp"

using namespace czk;

namespace {

gi::GeneratedInstance fixture(int v, bool iso, uint64_t seed) {
    return gi::gen_instance(v, iso, seed);
}

Tape random_tape(const Protocol& p, const Instance& x, Rng& rng) {
    int tb = p.tape_bits(x);
    return Tape::from_bits(rng.bytes(size_t((tb + 7) / 8)), tb);
}

}  // namespace

TEST_CASE("tape canonicalization zeroes spare bits") {
    Tape t = Tape::from_bits(Bytes{0xff, 0xff}, 9);
    CHECK(t.bytes.size() == 2);
    CHECK(t.bytes[1] == 0x01);
    Tape u = Tape::from_bits(Bytes{0xff}, 16);
    CHECK(u.bytes.size() == 2);
    CHECK(u.bytes[1] == 0x00);
}

TEST_CASE("wrong tape length is a configuration error") {
    gi::GiProtocol proto;
    auto inst = fixture(4, true, 11);
    Instance x = gi::make_instance(inst.pair);
    Tape bad = Tape::from_bits(Bytes{1, 2}, 16);
    CHECK_THROWS_AS((void)proto.first_challenge(x, bad), ConfigError);
    CHECK_THROWS_AS((void)proto.second_challenge(x, bad, Bytes{}), ConfigError);
}

TEST_CASE("operations are deterministic across repeated calls") {
    gi::GiProtocol proto;
    auto inst = fixture(5, true, 3);
    Instance x = gi::make_instance(inst.pair);
    Rng rng(21);
    Tape R = random_tape(proto, x, rng);
    Bytes q0 = proto.first_challenge(x, R);
    Rng coins(77);
    auto [r, st] = gi::prover_commit(inst.pair, q0, *inst.witness, coins);
    Bytes s0 = proto.second_challenge(x, R, r);
    Bytes t0 = gi::prover_respond(inst.pair, st, *inst.witness, s0);
    for (int i = 0; i < 100; i++) {
        CHECK(proto.first_challenge(x, R) == q0);
        CHECK(proto.second_challenge(x, R, r) == s0);
        CHECK(proto.accept(x, q0, r, s0, t0));
    }
}

TEST_CASE("block operations are the coordinate-wise lift") {
    gi::GiProtocol proto;
    auto inst = fixture(4, true, 5);
    Instance x = gi::make_instance(inst.pair);
    Rng rng(1234);
    for (int m = 1; m <= 8; m++) {
        BlockTape R;
        for (int c = 0; c < m; c++) R.copies.push_back(random_tape(proto, x, rng));
        BlockMsg q = block_first_challenge(proto, x, R);
        REQUIRE(int(q.size()) == m);
        BlockMsg r, s, t;
        for (int c = 0; c < m; c++) {
            CHECK(q[size_t(c)] == proto.first_challenge(x, R.copies[size_t(c)]));
            Rng coins(rng.fork_seed());
            auto [rc, st] = gi::prover_commit(inst.pair, q[size_t(c)], *inst.witness, coins);
            r.push_back(rc);
            s.push_back(proto.second_challenge(x, R.copies[size_t(c)], rc));
            t.push_back(gi::prover_respond(inst.pair, st, *inst.witness, s.back()));
        }
        BlockMsg s2 = block_second_challenge(proto, x, R, r);
        CHECK(s2 == s);
        // conjunction semantics, brute force
        bool all = true;
        for (int c = 0; c < m; c++)
            all = all && proto.accept(x, q[size_t(c)], r[size_t(c)], s[size_t(c)], t[size_t(c)]);
        CHECK(block_accept(proto, x, q, r, s, t) == all);
        CHECK(all);

        // one failing copy forces the block down
        BlockMsg t_bad = t;
        t_bad[0] = Bytes{};
        CHECK_FALSE(block_accept(proto, x, q, r, s, t_bad));
    }
}

TEST_CASE("block tuple length mismatch is a configuration error") {
    gi::GiProtocol proto;
    auto inst = fixture(4, true, 6);
    Instance x = gi::make_instance(inst.pair);
    Rng rng(9);
    BlockTape R;
    R.copies.push_back(random_tape(proto, x, rng));
    R.copies.push_back(random_tape(proto, x, rng));
    BlockMsg r{{Bytes{1}}};
    CHECK_THROWS_AS((void)block_second_challenge(proto, x, R, r), ConfigError);
    CHECK_THROWS_AS(
        (void)block_accept(proto, x, {Bytes{}}, {Bytes{}, Bytes{}}, {Bytes{}}, {Bytes{}}),
        ConfigError);
}

TEST_CASE("m = 1 blocks reduce to the scalar operations") {
    gi::GiProtocol proto;
    auto inst = fixture(4, true, 8);
    Instance x = gi::make_instance(inst.pair);
    Rng rng(10);
    Tape R = random_tape(proto, x, rng);
    BlockTape bt;
    bt.copies.push_back(R);
    CHECK(block_first_challenge(proto, x, bt)[0] == proto.first_challenge(x, R));
}
