#include "czk/splice.hpp"

#include <map>

namespace czk::splice {

using adversary::AdversaryOracle;
using adversary::PrefixQuery;
using adversary::ScheduleConfig;

const char* operational_name(Operational o) {
    switch (o) {
        case Operational::Succeeded: return "succeeded";
        case Operational::Failed: return "failed";
        case Operational::Aborted: return "aborted";
    }
    return "?";
}

namespace {

struct AttemptSuccess {
    bool verdict;
};
struct AttemptAbort {};
struct AttemptFail {};

// Verifier hooks that substitute the live conversation for coordinate j of
// the located sibling group. The group's own j-th coins stay unknown to the
// prover: q comes from the live verifier, s is fetched over the channel the
// first time the designated vertex is activated, and the poisoned tape slot
// makes any accidental use of base coins loud.
class LiveSpliceHooks final : public adversary::VerifierHooks {
public:
    LiveSpliceHooks(const AttemptConfig& cfg, const Instance& x, Bytes alpha, int coordinate_j,
                    Address addr, channel::HonestVerifierChannel& chan)
        : cfg_(cfg),
          x_(x),
          alpha_(std::move(alpha)),
          j_(coordinate_j),
          addr_(addr),
          chan_(chan),
          level_counts_(size_t(cfg.k), 0) {}

    bool r_sent() const { return r_sent_; }
    bool v_resolved() const { return v_resolved_; }

    void on_query(const PrefixQuery& prefix) override {
        Bytes key;
        for (size_t i = 0; i < prefix.rs.size(); i++) {
            append_block(key, prefix.rs[i]);
            auto [it, fresh] = seen_paths_.emplace(key, 0);
            if (!fresh) continue;
            long count = ++level_counts_[i];
            if (int(i) + 1 == addr_.level && count == addr_.a) {
                // the (i, a) vertex of this run materializes in this query
                v_exists_ = true;
                Bytes renc;
                append_block(renc, prefix.rs[i]);
                v_r_enc_ = std::move(renc);
                v_created_this_query_ = true;
            }
        }
    }

    void on_level(int level, const Bytes& history, BlockTape& R, BlockMsg& q) override {
        if (history == alpha_) {
            q[size_t(j_ - 1)] = chan_.first_challenge();
            R.copies[size_t(j_ - 1)] =
                Tape::from_bits(Bytes(), cfg_.protocol->tape_bits(x_));  // poison
        }
        if (v_created_this_query_ && level == addr_.level) {
            v_created_this_query_ = false;
            if (history != alpha_) throw AttemptAbort{};  // census drifted off the group
        }
    }

    BlockMsg second_challenge(const ScheduleConfig& scfg, const Instance& x, int level,
                              const Bytes& history, const BlockTape& R, const BlockMsg& q,
                              const BlockMsg& r) override {
        if (history != alpha_)
            return adversary::VerifierHooks::second_challenge(scfg, x, level, history, R, q, r);

        // an activation inside the spliced sibling group
        Bytes renc;
        append_block(renc, r);
        bool is_v = v_exists_ && renc == v_r_enc_;
        if (!is_v) {
            if (!r_sent_) throw AttemptAbort{};
            throw AttemptFail{};
        }
        if (!s_cache_.empty()) return s_cache_;
        Bytes s_live = chan_.respond_r(r[size_t(j_ - 1)]);
        r_sent_ = true;
        auto s = BlockMsg(size_t(scfg.m));
        for (int c = 0; c < scfg.m; c++) {
            if (c == j_ - 1)
                s[size_t(c)] = s_live;
            else
                s[size_t(c)] = scfg.protocol->second_challenge(x, R.copies[size_t(c)],
                                                               r[size_t(c)]);
        }
        s_cache_ = s;
        return s;
    }

    void on_resolved(int level, const Bytes& history, const BlockMsg& r,
                     const BlockMsg& t) override {
        (void)level;
        if (history != alpha_ || !v_exists_) return;
        Bytes renc;
        append_block(renc, r);
        if (renc != v_r_enc_) return;
        v_resolved_ = true;
        bool verdict = chan_.final_t(t[size_t(j_ - 1)]);
        throw AttemptSuccess{verdict};
    }

private:
    const AttemptConfig& cfg_;
    const Instance& x_;
    Bytes alpha_;
    int j_;
    Address addr_;
    channel::HonestVerifierChannel& chan_;

    std::map<Bytes, int> seen_paths_;
    std::vector<long> level_counts_;
    bool v_exists_ = false;
    bool v_created_this_query_ = false;
    Bytes v_r_enc_;
    BlockMsg s_cache_;
    bool r_sent_ = false;
    bool v_resolved_ = false;
};

struct Draw {
    hashfam::HashMember H;
    int j;
    Address addr;
    uint64_t sim_seed;
};

Draw draw_attempt(const AttemptConfig& cfg, Rng& rng) {
    auto H = hashfam::HashMember::sample(rng.fork_seed(), cfg.hash_t, cfg.hash_mode);
    int j = int(rng.below(uint64_t(cfg.m))) + 1;
    Address addr = sample_address(cfg.wp(), rng);
    uint64_t sim_seed = rng.fork_seed();
    return Draw{std::move(H), j, addr, sim_seed};
}

ScheduleConfig schedule(const AttemptConfig& cfg, const hashfam::HashView& h) {
    return ScheduleConfig{cfg.k, cfg.m, cfg.protocol, &h};
}

// Rehearsal: run the simulator on `seed` against the plain H and report the
// hash entry feeding the sibling group of `addr`, if that address exists.
std::optional<Bytes> locate_group(const Instance& x, const AttemptConfig& cfg,
                                  sim::Simulator& simulator, const hashfam::HashMember& H,
                                  uint64_t sim_seed, Address addr, tree::ProofTree* tree_out) {
    AdversaryOracle oracle(schedule(cfg, H), x, cfg.N);
    simulator.run(oracle, sim_seed);
    tree::ProofTree t = tree::build_tree(oracle.trace(), cfg.k, cfg.m, cfg.N);
    auto gen = t.at_address(addr.level, addr.a);
    std::optional<Bytes> alpha;
    if (gen) alpha = t.vertex(*gen).group_history;
    if (tree_out) *tree_out = std::move(t);
    return alpha;
}

}  // namespace

AttemptOutcome run_attempt(const Instance& x, const AttemptConfig& cfg, sim::Simulator& simulator,
                           channel::HonestVerifierChannel& chan, uint64_t seed) {
    if (!cfg.protocol) throw ConfigError("run_attempt: no protocol");
    Rng rng(seed);
    Draw d = draw_attempt(cfg, rng);

    AttemptOutcome out;
    out.address = d.addr;
    out.coordinate_j = d.j;

    auto alpha = locate_group(x, cfg, simulator, d.H, d.sim_seed, d.addr, nullptr);
    if (!alpha) {
        // address unoccupied in the rehearsal: nothing to splice, try again
        out.operational = Operational::Aborted;
        out.analysis = tree::AddressClass::Neither;
        return out;
    }

    LiveSpliceHooks hooks(cfg, x, *alpha, d.j, d.addr, chan);
    AdversaryOracle oracle(schedule(cfg, d.H), x, cfg.N);
    oracle.set_hooks(&hooks);

    bool decided = false;
    try {
        simulator.run(oracle, d.sim_seed);
    } catch (const AttemptSuccess& s) {
        out.operational = Operational::Succeeded;
        out.verdict = s.verdict;
        decided = true;
    } catch (const AttemptAbort&) {
        out.operational = Operational::Aborted;
        decided = true;
    } catch (const AttemptFail&) {
        out.operational = Operational::Failed;
        decided = true;
    }
    if (!decided)
        out.operational = hooks.r_sent() ? Operational::Failed : Operational::Aborted;
    out.v_sent_r = hooks.r_sent();
    out.steps = oracle.steps();

    tree::ProofTree t = tree::build_tree(oracle.trace(), cfg.k, cfg.m, cfg.N);
    if (out.operational == Operational::Succeeded) {
        // the resolving query unwound before it was traced
        if (auto gen = t.at_address(d.addr.level, d.addr.a)) t.mark_resolved(*gen);
    }
    out.analysis = tree::classify_address(t, d.addr.level, d.addr.a);
    out.tree_size = t.size();
    return out;
}

PsResult run_ps(const Instance& x, const AttemptConfig& cfg, sim::Simulator& simulator,
                channel::HonestVerifierChannel& chan, long max_attempts, uint64_t seed) {
    if (max_attempts < 1) throw ConfigError("run_ps: need max_attempts >= 1");
    PsResult res;
    for (long i = 0; i < max_attempts; i++) {
        AttemptOutcome out = run_attempt(x, cfg, simulator, chan, derive_seed(seed, "attempt", uint64_t(i)));
        res.attempts++;
        res.log.push_back(out);
        if (out.operational == Operational::Succeeded) {
            res.verdict = out.verdict ? Verdict::Convinced : Verdict::NotConvinced;
            return res;
        }
        if (out.operational == Operational::Failed) {
            res.verdict = Verdict::NotConvinced;
            return res;
        }
        res.aborted++;
    }
    res.verdict = Verdict::NotConvinced;
    return res;
}

Decision decide(const gi::GeneratedInstance& inst, const AttemptConfig& cfg, sim::SimKind kind,
                long max_attempts, uint64_t seed) {
    Instance x = gi::make_instance(inst.pair);
    Rng rng(derive_seed(seed, "decide", 0));
    int tb = cfg.protocol->tape_bits(x);
    Tape R = Tape::from_bits(rng.bytes(size_t((tb + 7) / 8)), tb);
    channel::InProcessChannel chan(*cfg.protocol, x, R);
    auto simulator = sim::make_simulator(kind, inst);
    PsResult res = run_ps(x, cfg, *simulator, chan, max_attempts, derive_seed(seed, "ps", 0));
    return res.verdict == Verdict::Convinced ? Decision::InL : Decision::NotInL;
}

ExperimentOutput experiment_spliced(const Instance& x, const AttemptConfig& cfg,
                                    sim::Simulator& simulator, uint64_t seed) {
    Rng rng(seed);
    Draw d = draw_attempt(cfg, rng);
    int tb = cfg.protocol->tape_bits(x);
    Tape R_live = Tape::from_bits(rng.bytes(size_t((tb + 7) / 8)), tb);

    tree::ProofTree rehearsal(cfg.k, cfg.m, cfg.N);
    auto alpha = locate_group(x, cfg, simulator, d.H, d.sim_seed, d.addr, &rehearsal);
    if (!alpha) {
        // the address never appears: H stays unmodified and the rehearsal run
        // is the output
        return ExperimentOutput{std::move(rehearsal), d.addr, tree::AddressClass::Neither, false};
    }

    hashfam::SplicedHash spliced =
        hashfam::splice_override(d.H, cfg.m, tb, *alpha, d.j, R_live);
    AdversaryOracle oracle(schedule(cfg, spliced), x, cfg.N);
    simulator.run(oracle, d.sim_seed);
    tree::ProofTree t = tree::build_tree(oracle.trace(), cfg.k, cfg.m, cfg.N);
    tree::AddressClass cls = tree::classify_address(t, d.addr.level, d.addr.a);
    return ExperimentOutput{std::move(t), d.addr, cls, true};
}

ExperimentOutput experiment_unspliced(const Instance& x, const AttemptConfig& cfg,
                                      sim::Simulator& simulator, uint64_t seed) {
    Rng rng(seed);
    Draw d = draw_attempt(cfg, rng);
    AdversaryOracle oracle(schedule(cfg, d.H), x, cfg.N);
    simulator.run(oracle, d.sim_seed);
    tree::ProofTree t = tree::build_tree(oracle.trace(), cfg.k, cfg.m, cfg.N);
    tree::AddressClass cls = tree::classify_address(t, d.addr.level, d.addr.a);
    return ExperimentOutput{std::move(t), d.addr, cls, false};
}

}  // namespace czk::splice
