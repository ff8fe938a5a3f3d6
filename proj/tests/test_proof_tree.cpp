#include "doctest.h"

#include "czk/harness.hpp"
#include "czk/proof_tree.hpp"

using namespace czk;
using namespace czk::tree;

namespace {

struct Lab {
    gi::GiProtocol proto;
    gi::GeneratedInstance inst;
    Instance x;

    explicit Lab(uint64_t seed = 3) : inst(gi::gen_instance(4, true, seed)), x(gi::make_instance(inst.pair)) {}

    ProofTree run(sim::SimKind kind, int k, int m, long N, uint64_t seed) {
        Rng rng(seed);
        auto H = hashfam::HashMember::sample(rng.fork_seed(), 64, hashfam::HashMode::PrgSeeded);
        adversary::ScheduleConfig cfg{k, m, &proto, &H};
        adversary::AdversaryOracle oracle(cfg, x, N);
        auto simulator = sim::make_simulator(kind, inst);
        simulator->run(oracle, rng.fork_seed());
        return build_tree(oracle.trace(), k, m, N);
    }
};

}  // namespace

TEST_CASE("a straight honest run builds one fully resolved path") {
    Lab lab;
    const int k = 3;
    ProofTree t = lab.run(sim::SimKind::WitnessOracle, k, 2, 64, 5);
    CHECK(t.size() == k);
    for (int lev = 1; lev <= k; lev++) {
        CHECK(t.level_count(lev) == 1);
        auto gen = t.at_address(lev, 1);
        REQUIRE(gen.has_value());
        CHECK(t.vertex(*gen).activated);
        CHECK(t.vertex(*gen).resolved);
        CHECK(classify(t, *gen) == AddressClass::Good);
    }
    auto snakes = decompose_snakes(t);
    REQUIRE(snakes.size() == 1);
    CHECK(snakes[0].height == k);
    CHECK(check_snake_decomposition(t, snakes).ok);

    WeightParams wp = weight_params(k, 64);
    auto rep = weights(t, wp);
    CHECK(rep.fail == Rat(0));
    Rat expect = 0;
    for (int lev = 1; lev <= k; lev++) expect += wp.address_weight(lev);
    CHECK(rep.succeed == expect);
    CHECK(rep.interesting == rep.succeed + rep.fail);

    // equality case of the snake weight bound
    auto bounds = check_snake_weight_bounds(t, snakes, wp);
    CHECK(bounds.ok);
    CHECK(bounds.interesting == bounds.interesting_bound);
    auto slack = check_fail_slack(t, snakes, wp);
    CHECK(slack.ok);
    CHECK(slack.has_full_height);
    CHECK(slack.full_height_ok);
}

TEST_CASE("an empty trace leaves only the dummy root") {
    ProofTree t = build_tree({}, 3, 2, 16);
    CHECK(t.size() == 0);
    WeightParams wp = weight_params(3, 16);
    auto rep = weights(t, wp);
    CHECK(rep.interesting == Rat(0));
    CHECK(decompose_snakes(t).empty());
}

TEST_CASE("a rewound bottom level shows up as siblings") {
    Lab lab;
    // rewinding at k=1 keeps re-committing the single block until the guess
    // matches, so level 1 collects one resolved vertex after bad siblings
    for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull, 6ull}) {
        ProofTree t = lab.run(sim::SimKind::Rewinding, 1, 1, 256, seed);
        long n = t.level_count(1);
        REQUIRE(n >= 1);
        auto last = t.at_address(1, n);
        CHECK(t.vertex(*last).resolved);
        for (long a = 1; a < n; a++) {
            auto gen = t.at_address(1, a);
            CHECK(t.vertex(*gen).activated);
            CHECK_FALSE(t.vertex(*gen).resolved);
            CHECK(classify(t, *gen) == AddressClass::Bad);
        }
        if (n == 1) CHECK(classify(t, *last) == AddressClass::Good);
        if (n > 1) CHECK(classify(t, *last) == AddressClass::Bad);  // activated siblings poison
    }
}

TEST_CASE("classification follows the good/bad definition") {
    ProofTree t(2, 1, 8);
    int v1 = t.add_vertex(1, 0);
    int v2 = t.add_vertex(2, v1);
    int v2b = t.add_vertex(2, v1);

    // untouched vertices are neither
    CHECK(classify(t, v2) == AddressClass::Neither);
    CHECK(classify_address(t, 2, 9) == AddressClass::Neither);  // out of range
    CHECK_FALSE(t.at_address(1, 2).has_value());                // unoccupied address

    t.mark_activated(v2);
    CHECK(classify(t, v2) == AddressClass::Bad);  // activated but not resolved
    t.mark_resolved(v2);
    CHECK(classify(t, v2) == AddressClass::Good);  // resolved, sibling quiet
    t.mark_activated(v2b);
    CHECK(classify(t, v2) == AddressClass::Bad);   // sibling activation poisons
    CHECK(classify(t, v2b) == AddressClass::Bad);  // activated, unresolved
}

TEST_CASE("snake decomposition covers interesting vertices disjointly") {
    // two interesting children: one continues, the other heads a new snake
    ProofTree t(3, 1, 8);
    int v1 = t.add_vertex(1, 0);
    int v2a = t.add_vertex(2, v1);
    int v3a = t.add_vertex(3, v2a);
    int v2b = t.add_vertex(2, v1);
    int v3b = t.add_vertex(3, v2b);
    t.mark_resolved(v3a);
    t.mark_resolved(v2a);
    t.mark_resolved(v3b);
    t.mark_activated(v2b);
    t.mark_resolved(v1);

    auto snakes = decompose_snakes(t);
    REQUIRE(snakes.size() == 2);
    CHECK(snakes[0].vertices == std::vector<int>{v1, v2a, v3a});
    CHECK(snakes[0].height == 3);
    CHECK(snakes[1].vertices == std::vector<int>{v2b, v3b});
    CHECK(snakes[1].height == 2);
    CHECK(check_snake_decomposition(t, snakes).ok);
}

TEST_CASE("two bad siblings under a dull parent both become heads") {
    ProofTree t(2, 1, 8);
    int v1 = t.add_vertex(1, 0);
    int v2a = t.add_vertex(2, v1);
    int v2b = t.add_vertex(2, v1);
    t.mark_activated(v2a);
    t.mark_activated(v2b);
    // v1 never activated: not interesting
    auto snakes = decompose_snakes(t);
    REQUIRE(snakes.size() == 2);
    CHECK(snakes[0].vertices == std::vector<int>{v2a});
    CHECK(snakes[1].vertices == std::vector<int>{v2b});
    CHECK(check_snake_decomposition(t, snakes).ok);
}

TEST_CASE("negative control: a lone bad vertex mid-body is flagged") {
    // schedule-inconsistent by construction: the parent claims resolution
    // while its only child is stuck
    ProofTree t(2, 1, 8);
    int v1 = t.add_vertex(1, 0);
    int v2 = t.add_vertex(2, v1);
    t.mark_resolved(v1);
    t.mark_activated(v2);

    auto snakes = decompose_snakes(t);
    auto res = check_snake_decomposition(t, snakes);
    CHECK_FALSE(res.ok);
    bool flagged_body = false, flagged_child = false;
    for (const auto& v : res.violations) {
        if (v.find("snake body") != std::string::npos) flagged_body = true;
        if (v.find("no resolved child") != std::string::npos) flagged_child = true;
    }
    CHECK(flagged_body);
    CHECK(flagged_child);
}

TEST_CASE("an interesting non-leaf without interesting children is structural corruption") {
    ProofTree t(2, 1, 8);
    int v1 = t.add_vertex(1, 0);
    t.add_vertex(2, v1);
    t.mark_activated(v1);  // child never activated
    CHECK_THROWS_AS((void)decompose_snakes(t), StructuralViolation);
}

TEST_CASE("level population is bounded by N") {
    ProofTree t(1, 1, 3);
    t.add_vertex(1, 0);
    t.add_vertex(1, 0);
    t.add_vertex(1, 0);
    CHECK_THROWS_AS((void)t.add_vertex(1, 0), StructuralViolation);
}

TEST_CASE("siblings disagreeing on coins are flagged") {
    ProofTree t(1, 1, 4);
    int a = t.add_vertex(1, 0, {}, {}, Bytes{1}, Bytes{1});
    int b = t.add_vertex(1, 0, {}, {}, Bytes{2}, Bytes{1});
    t.mark_resolved(a);
    t.mark_activated(b);
    auto snakes = decompose_snakes(t);
    auto res = check_snake_decomposition(t, snakes);
    CHECK_FALSE(res.ok);
    bool flagged = false;
    for (const auto& v : res.violations)
        if (v.find("disagree on R") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("adversarial short-snake tree still satisfies the slack bound") {
    // N snakes of height 1: one dull level-1 vertex whose N-1 remaining
    // children slots... build k=2 with one unactivated level-1 vertex and N
    // activated, unresolved level-2 children
    const long N = 16;
    WeightParams wp = weight_params(2, N);
    ProofTree t(2, 1, N);
    int v1 = t.add_vertex(1, 0);
    for (long i = 0; i < N; i++) {
        int c = t.add_vertex(2, v1);
        t.mark_activated(c);
    }
    auto snakes = decompose_snakes(t);
    CHECK(long(snakes.size()) == N);
    auto res = check_snake_decomposition(t, snakes);
    CHECK(res.ok);
    auto slack = check_fail_slack(t, snakes, wp);
    CHECK(slack.ok);
    CHECK(slack.fail == wp.c);  // N bad height-1 vertices, each c*f(1)/N
    auto bounds = check_snake_weight_bounds(t, snakes, wp);
    CHECK(bounds.ok);
}

TEST_CASE("property suite: random rewinding trees satisfy every pointwise check") {
    Lab lab(11);
    WeightParams wp = weight_params(3, 128);
    for (uint64_t seed = 0; seed < 100; seed++) {
        ProofTree t = lab.run(sim::SimKind::Rewinding, 3, 1, 128, seed);
        auto snakes = decompose_snakes(t);
        auto dec = check_snake_decomposition(t, snakes);
        if (!dec.ok) {
            for (auto& v : dec.violations) MESSAGE(v);
        }
        REQUIRE(dec.ok);
        REQUIRE(check_snake_weight_bounds(t, snakes, wp).ok);
        auto slack = check_fail_slack(t, snakes, wp);
        REQUIRE(slack.ok);
        REQUIRE(slack.full_height_ok);

        auto rep = weights(t, wp);
        REQUIRE(rep.interesting == rep.succeed + rep.fail);
    }
}

TEST_CASE("fingerprints distinguish shapes and addresses") {
    ProofTree a(2, 1, 4);
    int v1 = a.add_vertex(1, 0);
    a.add_vertex(2, v1);
    ProofTree b(2, 1, 4);
    int w1 = b.add_vertex(1, 0);
    int w2 = b.add_vertex(2, w1);
    b.mark_resolved(w2);
    CHECK(fingerprint(a) != fingerprint(b));
    CHECK(fingerprint_with_address(b, 1, 1) != fingerprint_with_address(b, 2, 1));
}

TEST_CASE("tree dumps are one valid record per vertex") {
    Lab lab;
    ProofTree t = lab.run(sim::SimKind::WitnessOracle, 2, 1, 16, 9);
    std::string dump = dump_jsonl(t);
    CHECK(std::count(dump.begin(), dump.end(), '\n') == t.size());
    CHECK(dump.find("\"class\":\"good\"") != std::string::npos);
}
