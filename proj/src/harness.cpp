#include "czk/harness.hpp"

#include <algorithm>
#include <cmath>

namespace czk::harness {

namespace {

const gi::GiProtocol& gi_protocol() {
    static gi::GiProtocol proto;
    return proto;
}

Tape random_tape(const Protocol& proto, const Instance& x, Rng& rng) {
    int tb = proto.tape_bits(x);
    return Tape::from_bits(rng.bytes(size_t((tb + 7) / 8)), tb);
}

gi::GeneratedInstance instance_for(const LabConfig& cfg, bool isomorphic, uint64_t seed) {
    return gi::gen_instance(cfg.v, isomorphic, seed);
}

tree::ProofTree one_tree(const LabConfig& cfg, const gi::GeneratedInstance& inst,
                         const Instance& x, uint64_t seed) {
    Rng rng(seed);
    auto H = hashfam::HashMember::sample(rng.fork_seed(), cfg.hash_t, cfg.hash_mode);
    adversary::ScheduleConfig scfg{cfg.k, cfg.m, &gi_protocol(), &H};
    adversary::AdversaryOracle oracle(scfg, x, cfg.N);
    auto simulator = sim::make_simulator(cfg.simulator, inst);
    simulator->run(oracle, rng.fork_seed());
    return tree::build_tree(oracle.trace(), cfg.k, cfg.m, cfg.N);
}

}  // namespace

Estimate completeness_mc(const LabConfig& cfg) {
    const auto& proto = gi_protocol();
    auto trial = [&](long i, uint64_t seed) {
        Rng rng(seed);
        auto inst = gi::gen_instance(cfg.v, true, rng.fork_seed());
        Instance x = gi::make_instance(inst.pair);
        Tape R = random_tape(proto, x, rng);
        Bytes q = proto.first_challenge(x, R);
        auto [r, st] = gi::prover_commit(inst.pair, q, *inst.witness, rng);
        Bytes s = proto.second_challenge(x, R, r);
        Bytes t = gi::prover_respond(inst.pair, st, *inst.witness, s);
        (void)i;
        return proto.accept(x, q, r, s, t);
    };
    return mc_estimate(cfg.trials, cfg.seed, "completeness", trial, cfg.effective_workers());
}

Estimate block_soundness_mc(const LabConfig& cfg, int copies) {
    const auto& proto = gi_protocol();
    // the canonical fixture: C6 vs two triangles
    gi::GeneratedInstance inst;
    inst.pair = gi::GraphPair{cycle_graph(6), two_triangles()};
    inst.isomorphic = false;
    Instance x = gi::make_instance(inst.pair);
    auto strategy = gi::best_cheating_prover(inst.pair, {});
    auto trial = [&, x](long i, uint64_t seed) {
        (void)i;
        Rng rng(seed);
        for (int c = 0; c < copies; c++) {
            Tape R = random_tape(proto, x, rng);
            Bytes q = proto.first_challenge(x, R);
            Perm sigma = random_perm(inst.pair.v(), rng);
            Bytes r = gi::GiProtocol::commit_message(inst.pair, q, strategy.guess, sigma);
            Bytes s = proto.second_challenge(x, R, r);
            if (s.size() != 1 || s[0] != uint8_t(strategy.guess)) return false;
            Bytes t(sigma.begin(), sigma.end());
            if (!proto.accept(x, q, r, s, t)) return false;
        }
        return true;
    };
    return mc_estimate(cfg.trials, cfg.seed, "block-soundness", trial, cfg.effective_workers());
}

TreeCheckStats run_lemma_suite(const LabConfig& cfg) {
    auto inst = instance_for(cfg, true, derive_seed(cfg.seed, "suite-instance", 0));
    Instance x = gi::make_instance(inst.pair);
    WeightParams wp = weight_params(cfg.k, cfg.N);

    struct TrialOut {
        int decomposition = 0, bounds = 0, slack = 0, full_height = 0;
        std::string why;
    };
    std::function<std::string(long, uint64_t)> trial = [&](long i, uint64_t seed) -> std::string {
        (void)i;
        tree::ProofTree t = one_tree(cfg, inst, x, seed);
        std::string why;
        try {
            auto snakes = tree::decompose_snakes(t);
            auto dec = tree::check_snake_decomposition(t, snakes);
            if (!dec.ok) why += "decomposition: " + dec.violations.front() + ";";
            auto bounds = tree::check_snake_weight_bounds(t, snakes, wp);
            if (!bounds.ok) why += "bounds;";
            auto slack = tree::check_fail_slack(t, snakes, wp);
            if (!slack.ok) why += "slack;";
            if (!slack.full_height_ok) why += "full-height-floor;";
        } catch (const tree::StructuralViolation& e) {
            why += std::string("structure: ") + e.what() + ";";
        }
        return why;
    };
    auto outs = run_trials<std::string>(cfg.trials, cfg.seed, "lemma-suite", trial,
                                        cfg.effective_workers());
    TreeCheckStats stats;
    stats.trees = cfg.trials;
    for (long i = 0; i < cfg.trials; i++) {
        const std::string& why = outs[size_t(i)];
        if (why.empty()) continue;
        if (why.find("decomposition") != std::string::npos ||
            why.find("structure") != std::string::npos)
            stats.decomposition_violations++;
        if (why.find("bounds") != std::string::npos) stats.bound_violations++;
        if (why.find("slack") != std::string::npos) stats.slack_violations++;
        if (why.find("full-height-floor") != std::string::npos) stats.full_height_violations++;
        if (stats.first_failures.size() < 5)
            stats.first_failures.push_back("trial " + std::to_string(i) + " seed " +
                                           std::to_string(derive_seed(cfg.seed, "lemma-suite",
                                                                      uint64_t(i))) +
                                           ": " + why);
    }
    return stats;
}

ExperimentCompare compare_experiments(const LabConfig& cfg) {
    auto inst = instance_for(cfg, true, derive_seed(cfg.seed, "exp-instance", 0));
    Instance x = gi::make_instance(inst.pair);
    splice::AttemptConfig acfg = cfg.attempt_config(gi_protocol());

    std::function<std::string(long, uint64_t)> spliced = [&](long, uint64_t seed) {
        auto simulator = sim::make_simulator(cfg.simulator, inst);
        auto out = splice::experiment_spliced(x, acfg, *simulator, seed);
        return tree::fingerprint_with_address(out.tree, out.address.level, out.address.a) +
               (out.spliced ? "|S" : "|-");
    };
    std::function<std::string(long, uint64_t)> unspliced = [&](long, uint64_t seed) {
        auto simulator = sim::make_simulator(cfg.simulator, inst);
        auto out = splice::experiment_unspliced(x, acfg, *simulator, seed);
        return tree::fingerprint_with_address(out.tree, out.address.level, out.address.a) + "|?";
    };

    auto h1 = run_trials<std::string>(cfg.trials, cfg.seed, "exp-spliced", spliced,
                                      cfg.effective_workers());
    auto h2 = run_trials<std::string>(cfg.trials, cfg.seed ^ 0x9e3779b97f4a7c15ull,
                                      "exp-unspliced", unspliced, cfg.effective_workers());

    ExperimentCompare out;
    out.trials = cfg.trials;
    for (auto& s : h1) {
        if (s.size() >= 2 && s[s.size() - 1] == 'S') out.spliced_installed++;
        out.hist_spliced[s.substr(0, s.size() - 2)]++;
    }
    for (auto& s : h2) out.hist_unspliced[s.substr(0, s.size() - 2)]++;
    out.chi2 = chi2_two_sample(out.hist_spliced, out.hist_unspliced);
    return out;
}

MatchedDirection matched_direction(const LabConfig& cfg) {
    auto inst = instance_for(cfg, true, derive_seed(cfg.seed, "matched-instance", 0));
    Instance x = gi::make_instance(inst.pair);
    splice::AttemptConfig acfg = cfg.attempt_config(gi_protocol());
    const auto& proto = gi_protocol();

    struct Pair {
        double succeed_w, fail_w;
        char op;  // 's', 'f', 'a'
    };
    std::function<std::string(long, uint64_t)> trial = [&](long, uint64_t seed) {
        auto simulator = sim::make_simulator(cfg.simulator, inst);
        auto probe = splice::experiment_unspliced(x, acfg, *simulator, seed);
        auto rep = tree::weights(probe.tree, acfg.wp());

        Rng rng(derive_seed(seed, "channel", 0));
        Tape R = random_tape(proto, x, rng);
        channel::InProcessChannel chan(proto, x, R);
        auto simulator2 = sim::make_simulator(cfg.simulator, inst);
        auto attempt = splice::run_attempt(x, acfg, *simulator2, chan, seed);
        char op = attempt.operational == splice::Operational::Succeeded ? 's'
                  : attempt.operational == splice::Operational::Failed  ? 'f'
                                                                        : 'a';
        return std::to_string(to_double(rep.succeed)) + "," +
               std::to_string(to_double(rep.fail)) + "," + op;
    };
    auto rows = run_trials<std::string>(cfg.trials, cfg.seed, "matched", trial,
                                        cfg.effective_workers());

    MatchedDirection out;
    out.trials = cfg.trials;
    double sum_s = 0, sum_f = 0, sum_s2 = 0, sum_f2 = 0;
    long n_succ = 0, n_fail = 0;
    for (const auto& row : rows) {
        size_t c1 = row.find(',');
        size_t c2 = row.find(',', c1 + 1);
        double ws = std::stod(row.substr(0, c1));
        double wf = std::stod(row.substr(c1 + 1, c2 - c1 - 1));
        char op = row[c2 + 1];
        sum_s += ws;
        sum_f += wf;
        sum_s2 += ws * ws;
        sum_f2 += wf * wf;
        if (op == 's') n_succ++;
        if (op == 'f') n_fail++;
    }
    double n = double(cfg.trials);
    out.p_succeeded = double(n_succ) / n;
    out.p_failed = double(n_fail) / n;
    out.success_count = double(n_succ);
    out.fail_count = double(n_fail);
    out.mean_succeed_weight = sum_s / n;
    out.mean_fail_weight = sum_f / n;
    double var_ws = std::max(0.0, sum_s2 / n - out.mean_succeed_weight * out.mean_succeed_weight);
    double var_wf = std::max(0.0, sum_f2 / n - out.mean_fail_weight * out.mean_fail_weight);
    double se_ps = std::sqrt(out.p_succeeded * (1 - out.p_succeeded) / n);
    double se_pf = std::sqrt(out.p_failed * (1 - out.p_failed) / n);
    out.sigma_succeed = std::sqrt(var_ws / n + se_ps * se_ps);
    out.sigma_fail = std::sqrt(var_wf / n + se_pf * se_pf);
    out.succeed_ok = out.p_succeeded >= out.mean_succeed_weight - 4 * out.sigma_succeed;
    out.fail_ok = out.p_failed <= out.mean_fail_weight + 4 * out.sigma_fail;
    return out;
}

SuccessFailRatio success_fail_ratio(const LabConfig& cfg) {
    AttemptRates rates = attempt_rates(cfg);
    SuccessFailRatio out;
    out.succeeded = rates.succeeded.successes;
    out.failed = rates.failed.successes;
    out.aborted = rates.aborted.successes;
    out.direction_ok = out.succeeded >= out.failed;
    out.ratio = double(out.succeeded) / double(std::max<long>(1, out.failed));
    return out;
}

AttemptRates attempt_rates(const LabConfig& cfg) {
    auto inst = instance_for(cfg, true, derive_seed(cfg.seed, "rates-instance", 0));
    Instance x = gi::make_instance(inst.pair);
    splice::AttemptConfig acfg = cfg.attempt_config(gi_protocol());
    const auto& proto = gi_protocol();

    std::function<std::string(long, uint64_t)> trial = [&](long, uint64_t seed) {
        Rng rng(derive_seed(seed, "channel", 0));
        Tape R = random_tape(proto, x, rng);
        channel::InProcessChannel chan(proto, x, R);
        auto simulator = sim::make_simulator(cfg.simulator, inst);
        auto attempt = splice::run_attempt(x, acfg, *simulator, chan, seed);
        std::string s;
        s.push_back(attempt.operational == splice::Operational::Succeeded ? 's'
                    : attempt.operational == splice::Operational::Failed  ? 'f'
                                                                          : 'a');
        s.push_back(attempt.analysis == tree::AddressClass::Good  ? 'G'
                    : attempt.analysis == tree::AddressClass::Bad ? 'B'
                                                                  : 'N');
        return s;
    };
    auto rows =
        run_trials<std::string>(cfg.trials, cfg.seed, "attempt-rates", trial, cfg.effective_workers());
    long ns = 0, nf = 0, na = 0, ng = 0, nb = 0;
    for (const auto& r : rows) {
        if (r[0] == 's') ns++;
        if (r[0] == 'f') nf++;
        if (r[0] == 'a') na++;
        if (r[1] == 'G') ng++;
        if (r[1] == 'B') nb++;
    }
    AttemptRates out;
    out.succeeded = wilson(ns, cfg.trials);
    out.failed = wilson(nf, cfg.trials);
    out.aborted = wilson(na, cfg.trials);
    out.good = wilson(ng, cfg.trials);
    out.bad = wilson(nb, cfg.trials);
    return out;
}

DeciderStats decider_batch(const LabConfig& cfg, long per_class) {
    splice::AttemptConfig acfg = cfg.attempt_config(gi_protocol());
    auto run_class = [&](bool iso, const char* domain) {
        std::function<bool(long, uint64_t)> trial = [&, iso](long i, uint64_t seed) {
            auto inst = gi::gen_instance(cfg.v, iso, derive_seed(cfg.seed, "decider-inst", uint64_t(i) | (iso ? 0x100000 : 0)));
            auto d = splice::decide(inst, acfg, cfg.simulator, cfg.max_attempts, seed);
            return iso ? d == splice::Decision::InL : d == splice::Decision::NotInL;
        };
        return mc_estimate(per_class, cfg.seed, domain, trial, cfg.effective_workers());
    };
    DeciderStats out;
    out.iso_accuracy = run_class(true, "decider-iso");
    out.noniso_accuracy = run_class(false, "decider-noniso");
    return out;
}

std::vector<BlowupRow> blowup_bench(const LabConfig& cfg, int k_min, int k_max) {
    std::vector<BlowupRow> rows;
    for (int k = k_min; k <= k_max; k++) {
        LabConfig c = cfg;
        c.k = k;
        c.m = 1;
        auto inst = instance_for(c, true, derive_seed(cfg.seed, "blowup-instance", uint64_t(k)));
        Instance x = gi::make_instance(inst.pair);
        std::function<std::string(long, uint64_t)> trial = [&](long, uint64_t seed) {
            Rng rng(seed);
            auto H = hashfam::HashMember::sample(rng.fork_seed(), c.hash_t, c.hash_mode);
            adversary::ScheduleConfig scfg{c.k, c.m, &gi_protocol(), &H};
            adversary::AdversaryOracle oracle(scfg, x, c.N);
            auto simulator = sim::make_simulator(sim::SimKind::Rewinding, inst);
            auto run = simulator->run(oracle, rng.fork_seed());
            long total_attempts = 0;
            for (long a : run.block_attempts) total_attempts += a;
            return std::to_string(run.steps) + "," +
                   std::to_string(run.block_attempts.empty() ? 0 : run.block_attempts[0]) + "," +
                   std::to_string(total_attempts);
        };
        auto outs = run_trials<std::string>(c.trials, c.seed, "blowup-k" + std::to_string(k),
                                            trial, c.effective_workers());
        std::vector<double> steps;
        double sum_steps = 0, sum_first = 0, sum_total = 0;
        for (const auto& s : outs) {
            size_t c1 = s.find(','), c2 = s.find(',', c1 + 1);
            double st = std::stod(s.substr(0, c1));
            double fa = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
            double ta = std::stod(s.substr(c2 + 1));
            steps.push_back(st);
            sum_steps += st;
            sum_first += fa;
            sum_total += ta;
        }
        std::sort(steps.begin(), steps.end());
        BlowupRow row;
        row.k = k;
        row.trials = c.trials;
        row.mean_steps = sum_steps / double(c.trials);
        row.p50_steps = steps[size_t(double(steps.size()) * 0.50)];
        row.p99_steps = steps[std::min(steps.size() - 1, size_t(double(steps.size()) * 0.99))];
        row.mean_first_block_attempts = sum_first / double(c.trials);
        row.mean_total_attempts = sum_total / double(c.trials);
        rows.push_back(row);
    }
    return rows;
}

Estimate success_under_cap(const LabConfig& cfg, long cap) {
    auto inst = instance_for(cfg, true, derive_seed(cfg.seed, "cap-instance", 0));
    Instance x = gi::make_instance(inst.pair);
    std::function<bool(long, uint64_t)> trial = [&](long, uint64_t seed) {
        Rng rng(seed);
        auto H = hashfam::HashMember::sample(rng.fork_seed(), cfg.hash_t, cfg.hash_mode);
        adversary::ScheduleConfig scfg{cfg.k, cfg.m, &gi_protocol(), &H};
        adversary::AdversaryOracle oracle(scfg, x, cap);
        auto simulator = sim::make_simulator(cfg.simulator, inst);
        return simulator->run(oracle, rng.fork_seed()).completed;
    };
    return mc_estimate(cfg.trials, cfg.seed, "under-cap", trial, cfg.effective_workers());
}

long measured_step_percentile(const LabConfig& cfg, double pct, long probe_trials) {
    auto inst = instance_for(cfg, true, derive_seed(cfg.seed, "pctl-instance", 0));
    Instance x = gi::make_instance(inst.pair);
    std::function<long(long, uint64_t)> trial = [&](long, uint64_t seed) {
        Rng rng(seed);
        auto H = hashfam::HashMember::sample(rng.fork_seed(), cfg.hash_t, cfg.hash_mode);
        adversary::ScheduleConfig scfg{cfg.k, cfg.m, &gi_protocol(), &H};
        adversary::AdversaryOracle oracle(scfg, x, 0);  // uncapped probe
        auto simulator = sim::make_simulator(cfg.simulator, inst);
        return simulator->run(oracle, rng.fork_seed()).steps;
    };
    auto steps = run_trials<long>(probe_trials, cfg.seed, "step-percentile", trial,
                                  cfg.effective_workers());
    std::sort(steps.begin(), steps.end());
    size_t idx = std::min(steps.size() - 1, size_t(double(steps.size()) * pct));
    return steps[idx];
}

Chi2Result address_sampling_chi2(const LabConfig& cfg, long draws) {
    WeightParams wp = weight_params(cfg.k, cfg.N);
    std::vector<long> counts(size_t(cfg.k) * size_t(cfg.N), 0);
    Rng rng(derive_seed(cfg.seed, "addr-chi2", 0));
    for (long d = 0; d < draws; d++) {
        Address a = sample_address(wp, rng);
        counts[size_t(a.level - 1) * size_t(cfg.N) + size_t(a.a - 1)]++;
    }
    std::vector<Rat> probs;
    probs.reserve(counts.size());
    for (int lev = 1; lev <= cfg.k; lev++)
        for (long a = 0; a < cfg.N; a++) probs.push_back(wp.address_weight(lev));
    return chi2_goodness_of_fit(counts, probs);
}

}  // namespace czk::harness
