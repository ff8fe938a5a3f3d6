#include "czk/simulators.hpp"

namespace czk::sim {

using adversary::AdversaryOracle;
using adversary::PrefixQuery;
using adversary::ReplyKind;
using adversary::VerifierReply;

SimKind sim_kind_from_name(const std::string& name) {
    if (name == "witness" || name == "witness-oracle") return SimKind::WitnessOracle;
    if (name == "rewinding") return SimKind::Rewinding;
    throw ConfigError("unknown simulator kind: " + name);
}

const char* sim_kind_name(SimKind k) {
    return k == SimKind::WitnessOracle ? "witness-oracle" : "rewinding";
}

SimRun WitnessOracleSim::run(AdversaryOracle& oracle, uint64_t seed) {
    SimRun out;
    if (!witness_) return out;  // nothing to simulate without the witness

    const int k = oracle.config().k;
    const int m = oracle.config().m;
    Rng rng(seed);
    PrefixQuery pf;
    auto states = std::vector<std::vector<gi::ProverCopyState>>(size_t(k));

    try {
        VerifierReply rep = oracle.query(pf);
        for (int i = 1; i <= k; i++) {
            if (rep.kind != ReplyKind::NextQ || rep.session != i)
                throw ProtocolViolation("unexpected creation-phase reply");
            BlockMsg rb;
            rb.reserve(size_t(m));
            for (int c = 0; c < m; c++) {
                auto [r, st] = gi::prover_commit(pair_, rep.msg[size_t(c)], *witness_, rng);
                rb.push_back(std::move(r));
                states[size_t(i - 1)].push_back(std::move(st));
            }
            pf.rs.push_back(std::move(rb));
            rep = oracle.query(pf);
        }
        for (int lev = k; lev >= 1; lev--) {
            if (rep.kind != ReplyKind::NextS || rep.session != lev)
                throw ProtocolViolation("unexpected resolution-phase reply");
            BlockMsg tb;
            tb.reserve(size_t(m));
            for (int c = 0; c < m; c++)
                tb.push_back(gi::prover_respond(pair_, states[size_t(lev - 1)][size_t(c)],
                                                *witness_, rep.msg[size_t(c)]));
            pf.ts.push_back(std::move(tb));
            rep = oracle.query(pf);
        }
        out.completed = (rep.kind == ReplyKind::Accept);
    } catch (const adversary::CapExhausted&) {
        out.completed = false;
    }
    out.steps = oracle.steps();
    return out;
}

namespace {

struct RewindState {
    AdversaryOracle& oracle;
    const gi::GraphPair& pair;
    Rng rng;
    int k, m;
    PrefixQuery pf;
    std::vector<long>& attempts;

    // Resolves blocks i..k (q-block for session i given) and answers t_i.
    // Returns the reply to t_i: NextS(i-1), or Accept when i == 1.
    VerifierReply resolve(int i, const BlockMsg& q_block) {
        for (;;) {
            attempts[size_t(i - 1)]++;
            pf.rs.resize(size_t(i - 1));
            pf.ts.clear();
            auto guesses = std::vector<int>(size_t(m), 0);
            auto sigmas = std::vector<Perm>(size_t(m));
            auto rb = BlockMsg(size_t(m));
            for (int c = 0; c < m; c++) {
                guesses[size_t(c)] = rng.bit();
                sigmas[size_t(c)] = random_perm(pair.v(), rng);
                rb[size_t(c)] = gi::GiProtocol::commit_message(pair, q_block[size_t(c)],
                                                               guesses[size_t(c)],
                                                               sigmas[size_t(c)]);
            }
            pf.rs.push_back(std::move(rb));

            VerifierReply rep;
            if (i < k) {
                rep = oracle.query(pf);  // next q-block
                if (rep.kind != ReplyKind::NextQ)
                    throw ProtocolViolation("unexpected reply during descent");
                rep = resolve(i + 1, rep.msg);
                // deeper rewinds may have rebuilt pf; our own r-block is intact
            } else {
                rep = oracle.query(pf);
            }
            if (rep.kind != ReplyKind::NextS || rep.session != i)
                throw ProtocolViolation("expected the second question for this session");

            bool guessed = true;
            for (int c = 0; c < m; c++) {
                const Bytes& s = rep.msg[size_t(c)];
                if (s.size() != 1 || s[0] != uint8_t(guesses[size_t(c)])) guessed = false;
            }
            if (!guessed) continue;  // activated but unresolvable; rewind this block

            auto tb = BlockMsg(size_t(m));
            for (int c = 0; c < m; c++)
                tb[size_t(c)] = Bytes(sigmas[size_t(c)].begin(), sigmas[size_t(c)].end());
            pf.ts.push_back(std::move(tb));
            return oracle.query(pf);
        }
    }
};

}  // namespace

SimRun RewindingSim::run(AdversaryOracle& oracle, uint64_t seed) {
    SimRun out;
    const int k = oracle.config().k;
    out.block_attempts.assign(size_t(k), 0);
    RewindState st{oracle, pair_, Rng(seed), k, oracle.config().m, {}, out.block_attempts};
    try {
        VerifierReply rep = st.oracle.query(st.pf);
        if (rep.kind != ReplyKind::NextQ) throw ProtocolViolation("bad initial reply");
        rep = st.resolve(1, rep.msg);
        out.completed = (rep.kind == ReplyKind::Accept);
    } catch (const adversary::CapExhausted&) {
        out.completed = false;
    }
    out.steps = oracle.steps();
    return out;
}

std::unique_ptr<Simulator> make_simulator(SimKind kind, const gi::GeneratedInstance& inst) {
    switch (kind) {
        case SimKind::WitnessOracle:
            return std::make_unique<WitnessOracleSim>(inst.pair, inst.witness);
        case SimKind::Rewinding:
            return std::make_unique<RewindingSim>(inst.pair);
    }
    throw ConfigError("unknown simulator kind");
}

}  // namespace czk::sim
