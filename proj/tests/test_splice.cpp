#include "doctest.h"

#include <map>

#include "czk/harness.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <thread>

using namespace czk;

namespace {

struct SpliceLab {
    gi::GiProtocol proto;
    gi::GeneratedInstance inst;
    Instance x;
    splice::AttemptConfig cfg;

    SpliceLab(int k, int m, long N, uint64_t seed = 7, int v = 4, bool iso = true)
        : inst(gi::gen_instance(v, iso, seed)), x(gi::make_instance(inst.pair)) {
        cfg.k = k;
        cfg.m = m;
        cfg.N = N;
        cfg.protocol = &proto;
    }

    channel::InProcessChannel fresh_channel(uint64_t seed) {
        Rng rng(seed);
        int tb = proto.tape_bits(x);
        return channel::InProcessChannel(proto, x,
                                         Tape::from_bits(rng.bytes(size_t((tb + 7) / 8)), tb));
    }
};

}  // namespace

TEST_CASE("the honest channel enforces the one-shot discipline") {
    SpliceLab lab(2, 1, 16);
    auto chan = lab.fresh_channel(3);
    CHECK(chan.first_challenge().size() == 8);
    CHECK_FALSE(chan.r_sent());
    Rng coins(5);
    auto [r, st] = gi::prover_commit(lab.inst.pair, chan.first_challenge(), *lab.inst.witness,
                                     coins);
    Bytes s = chan.respond_r(r);
    CHECK(chan.r_sent());
    CHECK_THROWS_AS((void)chan.respond_r(r), ProtocolViolation);
    Bytes t = gi::prover_respond(lab.inst.pair, st, *lab.inst.witness, s);
    CHECK(chan.final_t(t));
    CHECK(chan.verdict() == std::optional<bool>{true});
    CHECK_THROWS_AS((void)chan.final_t(t), ProtocolViolation);
}

TEST_CASE("t before r is a protocol violation") {
    SpliceLab lab(2, 1, 16);
    auto chan = lab.fresh_channel(4);
    CHECK_THROWS_AS((void)chan.final_t(Bytes{1}), ProtocolViolation);
}

TEST_CASE("the framed socket transport carries a full session") {
    SpliceLab lab(2, 1, 16);
    int fds[2];
    REQUIRE(socketpair(AF_UNIX, SOCK_STREAM, 0, fds) == 0);
    Rng rng(9);
    int tb = lab.proto.tape_bits(lab.x);
    Tape R = Tape::from_bits(rng.bytes(size_t((tb + 7) / 8)), tb);

    std::thread server([&] { channel::serve_channel(fds[0], lab.proto, lab.x, R); });
    {
        channel::SocketChannel chan(fds[1]);
        CHECK(chan.first_challenge() == lab.proto.first_challenge(lab.x, R));
        Rng coins(11);
        auto [r, st] =
            gi::prover_commit(lab.inst.pair, chan.first_challenge(), *lab.inst.witness, coins);
        Bytes s = chan.respond_r(r);
        CHECK_THROWS_AS((void)chan.respond_r(r), ProtocolViolation);
        Bytes t = gi::prover_respond(lab.inst.pair, st, *lab.inst.witness, s);
        CHECK(chan.final_t(t));
    }
    server.join();
    close(fds[0]);
    close(fds[1]);
}

TEST_CASE("frame encoding is 4-byte big-endian length plus payload") {
    Bytes f = channel::encode_frame(Bytes{0xaa, 0xbb});
    CHECK(f == Bytes{0, 0, 0, 2, 0xaa, 0xbb});
}

TEST_CASE("witness-oracle attempts either splice the path or abort untouched") {
    SpliceLab lab(3, 2, 64);
    long succeeded = 0;
    for (uint64_t seed = 0; seed < 200; seed++) {
        auto chan = lab.fresh_channel(derive_seed(1, "chan", seed));
        auto simulator = sim::make_simulator(sim::SimKind::WitnessOracle, lab.inst);
        auto out = splice::run_attempt(lab.x, lab.cfg, *simulator, chan, seed);
        if (out.operational == splice::Operational::Succeeded) {
            succeeded++;
            CHECK(out.verdict);
            CHECK(out.address.a == 1);  // only on-path addresses can host the splice
            CHECK(out.v_sent_r);
            CHECK(chan.verdict() == std::optional<bool>{true});
        } else {
            CHECK(out.operational == splice::Operational::Aborted);  // never Failed
            CHECK_FALSE(out.v_sent_r);
            CHECK_FALSE(chan.r_sent());  // abort purity
            CHECK(chan.verdict() == std::nullopt);
        }
    }
    CHECK(succeeded > 0);
}

TEST_CASE("per-attempt success probability for the ideal simulator is 1/N") {
    // every level has exactly one vertex, so the splice lands on the path iff
    // a == 1, which the sampler picks with probability 1/N at every level
    SpliceLab lab(2, 1, 8);
    long succeeded = 0;
    const long n = 4000;
    for (long i = 0; i < n; i++) {
        auto chan = lab.fresh_channel(derive_seed(2, "chan", uint64_t(i)));
        auto simulator = sim::make_simulator(sim::SimKind::WitnessOracle, lab.inst);
        auto out = splice::run_attempt(lab.x, lab.cfg, *simulator, chan, uint64_t(i));
        if (out.operational == splice::Operational::Succeeded) succeeded++;
    }
    double p = double(succeeded) / double(n);
    double expect = 1.0 / double(lab.cfg.N);
    double sigma = std::sqrt(expect * (1 - expect) / double(n));
    CHECK(std::abs(p - expect) <= 4 * sigma);
}

TEST_CASE("rewinding at k=1 fails exactly when the live challenge disagrees") {
    // level 1 has a single sibling group, so the address is always in it;
    // a wrong first guess burns the channel and a later sibling activation
    // must surface as Failed
    SpliceLab lab(1, 1, 32);
    std::map<splice::Operational, long> hist;
    for (uint64_t seed = 0; seed < 300; seed++) {
        auto chan = lab.fresh_channel(derive_seed(3, "chan", seed));
        auto simulator = sim::make_simulator(sim::SimKind::Rewinding, lab.inst);
        auto out = splice::run_attempt(lab.x, lab.cfg, *simulator, chan, seed);
        hist[out.operational]++;
        if (out.operational == splice::Operational::Failed) {
            CHECK(out.v_sent_r);
            CHECK(chan.r_sent());
            CHECK(chan.verdict() == std::nullopt);
        }
        if (out.operational == splice::Operational::Succeeded) CHECK(out.verdict);
    }
    CHECK(hist[splice::Operational::Succeeded] > 0);
    CHECK(hist[splice::Operational::Failed] > 0);
    CHECK(hist[splice::Operational::Aborted] > 0);  // address beyond the census
}

TEST_CASE("the retry loop stops at the first success or failure") {
    SpliceLab lab(2, 1, 8);
    long convinced = 0;
    const long runs = 60;
    for (uint64_t seed = 0; seed < uint64_t(runs); seed++) {
        auto chan = lab.fresh_channel(derive_seed(4, "chan", seed));
        auto simulator = sim::make_simulator(sim::SimKind::WitnessOracle, lab.inst);
        auto res = splice::run_ps(lab.x, lab.cfg, *simulator, chan, 500, seed);
        if (res.verdict == splice::Verdict::Convinced) {
            convinced++;
            CHECK(res.log.back().operational == splice::Operational::Succeeded);
            CHECK(res.aborted == res.attempts - 1);
        }
    }
    // witness-oracle attempts never fail, so the loop almost surely converges
    CHECK(double(convinced) / double(runs) >= 2.0 / 3.0);
}

TEST_CASE("the decider answers InL on isomorphic and NotInL on non-isomorphic inputs") {
    gi::GiProtocol proto;
    splice::AttemptConfig cfg;
    cfg.k = 2;
    cfg.m = 1;
    cfg.N = 8;
    cfg.protocol = &proto;

    auto iso = gi::gen_instance(4, true, 21);
    auto noniso = gi::gen_instance(4, false, 22);
    long in_l = 0;
    for (uint64_t s = 0; s < 30; s++)
        if (splice::decide(iso, cfg, sim::SimKind::WitnessOracle, 300, s) ==
            splice::Decision::InL)
            in_l++;
    CHECK(in_l >= 20);

    for (uint64_t s = 0; s < 30; s++)
        CHECK(splice::decide(noniso, cfg, sim::SimKind::WitnessOracle, 50, s) ==
              splice::Decision::NotInL);

    // determinism under a fixed master seed
    CHECK(splice::decide(iso, cfg, sim::SimKind::WitnessOracle, 300, 5) ==
          splice::decide(iso, cfg, sim::SimKind::WitnessOracle, 300, 5));
}

TEST_CASE("probe experiments agree at micro scale") {
    SpliceLab lab(2, 1, 8, 31, 3);
    lab.cfg.hash_mode = hashfam::HashMode::Exact64;
    lab.cfg.hash_t = 48;
    std::map<std::string, long> h1, h2;
    const long n = 3000;
    for (long i = 0; i < n; i++) {
        auto s1 = sim::make_simulator(sim::SimKind::Rewinding, lab.inst);
        auto o1 = splice::experiment_spliced(lab.x, lab.cfg, *s1,
                                             derive_seed(77, "e1", uint64_t(i)));
        h1[tree::fingerprint_with_address(o1.tree, o1.address.level, o1.address.a)]++;
        auto s2 = sim::make_simulator(sim::SimKind::Rewinding, lab.inst);
        auto o2 = splice::experiment_unspliced(lab.x, lab.cfg, *s2,
                                               derive_seed(78, "e2", uint64_t(i)));
        h2[tree::fingerprint_with_address(o2.tree, o2.address.level, o2.address.a)]++;
    }
    auto res = harness::chi2_two_sample(h1, h2);
    CHECK(res.p_value > 0.001);
}

TEST_CASE("unspliced probes never install an override") {
    SpliceLab lab(2, 1, 8);
    auto simulator = sim::make_simulator(sim::SimKind::Rewinding, lab.inst);
    auto out = splice::experiment_unspliced(lab.x, lab.cfg, *simulator, 5);
    CHECK_FALSE(out.spliced);
    CHECK(out.tree.size() >= 1);
}
