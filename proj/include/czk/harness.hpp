#pragma once

#include "czk/checks.hpp"
#include "czk/estimate.hpp"
#include "czk/splice.hpp"

namespace czk::harness {

// One bag of knobs for every driver; mirrors the CLI flags.
struct LabConfig {
    int k = 3;
    int m = 2;
    int v = 6;           // graph size
    long N = 256;        // step cap / address bound
    long trials = 1000;
    long max_attempts = 2000;
    uint64_t seed = 42;
    sim::SimKind simulator = sim::SimKind::Rewinding;
    hashfam::HashMode hash_mode = hashfam::HashMode::PrgSeeded;
    int hash_t = 64;
    int workers = 0;  // 0 = hardware concurrency

    splice::AttemptConfig attempt_config(const Protocol& proto) const {
        splice::AttemptConfig c;
        c.k = k;
        c.m = m;
        c.N = N;
        c.protocol = &proto;
        c.hash_mode = hash_mode;
        c.hash_t = hash_t;
        return c;
    }
    int effective_workers() const { return workers > 0 ? workers : default_workers(); }
};

// --- completeness / soundness -----------------------------------------------

// Honest prover vs honest verifier, one full conversation per trial.
Estimate completeness_mc(const LabConfig& cfg);

// Optimal single-copy cheating strategy played against an m-block of honest
// verifier copies on a non-isomorphic pair.
Estimate block_soundness_mc(const LabConfig& cfg, int copies);

// --- proof-tree lemma suite --------------------------------------------------

struct TreeCheckStats {
    long trees = 0;
    long decomposition_violations = 0;
    long bound_violations = 0;
    long slack_violations = 0;
    long full_height_violations = 0;
    std::vector<std::string> first_failures;  // "(trial, seed): why"
    bool ok() const {
        return decomposition_violations == 0 && bound_violations == 0 &&
               slack_violations == 0 && full_height_violations == 0;
    }
};

// Generates cfg.trials simulator trees and runs every pointwise check on each.
TreeCheckStats run_lemma_suite(const LabConfig& cfg);

// --- spliced vs unspliced probe experiments ----------------------------------

struct ExperimentCompare {
    Chi2Result chi2;
    long trials = 0;
    long spliced_installed = 0;  // probes where an override was actually placed
    std::map<std::string, long> hist_spliced, hist_unspliced;
};

ExperimentCompare compare_experiments(const LabConfig& cfg);

// --- operational vs pessimistic accounting (matched trials) ------------------

struct MatchedDirection {
    long trials = 0;
    double p_succeeded = 0, p_failed = 0;
    double mean_succeed_weight = 0, mean_fail_weight = 0;
    double sigma_succeed = 0, sigma_fail = 0;  // combined standard errors
    bool succeed_ok = false, fail_ok = false;
    double success_count = 0, fail_count = 0;
};

// Per trial (same derived seed on both sides): one unspliced probe for the
// SUCCEED/FAIL weights and one live attempt against a fresh honest verifier.
// Checks p_succeeded >= E[SUCCEED] - 4 sigma and p_failed <= E[FAIL] + 4 sigma.
MatchedDirection matched_direction(const LabConfig& cfg);

// Success >= fail head-to-head at a given (k, m); reports the measured ratio.
struct SuccessFailRatio {
    long succeeded = 0, failed = 0, aborted = 0;
    bool direction_ok = false;
    double ratio = 0;  // succeeded / max(1, failed)
};
SuccessFailRatio success_fail_ratio(const LabConfig& cfg);

// --- attempt / decider statistics --------------------------------------------

struct AttemptRates {
    Estimate succeeded, failed, aborted;
    Estimate good, bad;  // analysis classes over the same attempts
};
AttemptRates attempt_rates(const LabConfig& cfg);

struct DeciderStats {
    Estimate iso_accuracy;     // InL on isomorphic inputs
    Estimate noniso_accuracy;  // NotInL on non-isomorphic inputs
};
DeciderStats decider_batch(const LabConfig& cfg, long per_class);

// --- blowup bench -------------------------------------------------------------

struct BlowupRow {
    int k = 0;
    double mean_steps = 0;
    double p50_steps = 0, p99_steps = 0;
    double mean_first_block_attempts = 0;
    double mean_total_attempts = 0;
    long trials = 0;
};
std::vector<BlowupRow> blowup_bench(const LabConfig& cfg, int k_min, int k_max);

// Fraction of runs completing within the cap, Wilson interval.
Estimate success_under_cap(const LabConfig& cfg, long cap);

// Measured high percentile of uncapped step counts (cap policy input).
long measured_step_percentile(const LabConfig& cfg, double pct, long probe_trials);

// --- address sampling ----------------------------------------------------------

Chi2Result address_sampling_chi2(const LabConfig& cfg, long draws);

}  // namespace czk::harness
