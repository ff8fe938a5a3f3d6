#pragma once

#include "czk/channel.hpp"
#include "czk/proof_tree.hpp"
#include "czk/simulators.hpp"
#include "czk/weights.hpp"

namespace czk::splice {

// Shared knobs for attempts and experiments. N is both the simulator step cap
// and the address-space bound the weights divide by.
struct AttemptConfig {
    int k = 2;
    int m = 1;
    long N = 64;
    const Protocol* protocol = nullptr;
    hashfam::HashMode hash_mode = hashfam::HashMode::PrgSeeded;
    int hash_t = 64;

    WeightParams wp() const { return weight_params(k, N); }
    int tape_bits(const Instance& x) const { return protocol->tape_bits(x); }
};

enum class Operational { Succeeded, Failed, Aborted };
const char* operational_name(Operational o);

// Record of one splicing attempt. `operational` is what actually happened on
// the live channel; `analysis` is the pessimistic classification of the
// chosen address over the executed portion of the run. Succeeded implies the
// honest verifier accepted.
struct AttemptOutcome {
    Operational operational = Operational::Aborted;
    tree::AddressClass analysis = tree::AddressClass::Neither;
    Address address;
    int coordinate_j = 1;
    bool v_sent_r = false;
    bool verdict = false;
    long steps = 0;
    int tree_size = 0;
};

// One splicing attempt against a live honest verifier.
//
// The prover samples a fresh H, a coordinate j and an address (i, a), runs
// the simulator once in its head to find the hash entry feeding the sibling
// group of (i, a), then reruns the simulator on the same coins against the
// verifier whose question at that entry carries the live q in coordinate j.
// The designated vertex v is the (i, a) vertex of the live rerun, provided it
// lands in the located group (otherwise the attempt aborts untouched).
//
//   - a sibling of v activates before v       -> Aborted, channel untouched
//   - v activates                             -> send r = r^j, splice in s
//   - a sibling activates while r is out      -> Failed (stuck)
//   - the simulator resolves v                -> forward t^j, Succeeded
AttemptOutcome run_attempt(const Instance& x, const AttemptConfig& cfg, sim::Simulator& simulator,
                           channel::HonestVerifierChannel& chan, uint64_t seed);

enum class Verdict { Convinced, NotConvinced };

struct PsResult {
    Verdict verdict = Verdict::NotConvinced;
    long attempts = 0;
    long aborted = 0;
    std::vector<AttemptOutcome> log;
};

// The retry loop: fresh (H, j, address, simulator coins) per attempt; the
// honest channel persists across aborted attempts and the loop stops on the
// first success or failure.
PsResult run_ps(const Instance& x, const AttemptConfig& cfg, sim::Simulator& simulator,
                channel::HonestVerifierChannel& chan, long max_attempts, uint64_t seed);

enum class Decision { InL, NotInL };

// Theorem-style decider: run the splicing prover against a fresh honest
// verifier and answer InL iff the verifier accepted.
Decision decide(const gi::GeneratedInstance& inst, const AttemptConfig& cfg, sim::SimKind kind,
                long max_attempts, uint64_t seed);

// Probe experiments over the (tree, chosen address) joint distribution.
struct ExperimentOutput {
    tree::ProofTree tree;
    Address address;
    tree::AddressClass cls = tree::AddressClass::Neither;
    bool spliced = false;  // a splice was actually installed
};

// Splice-first: sample (i, a), j and a uniform replacement tape up front,
// locate the group entry with an unspliced rehearsal run, then rerun the same
// simulator coins against the point-overridden hash.
ExperimentOutput experiment_spliced(const Instance& x, const AttemptConfig& cfg,
                                    sim::Simulator& simulator, uint64_t seed);

// Run unspliced, then sample the address.
ExperimentOutput experiment_unspliced(const Instance& x, const AttemptConfig& cfg,
                                      sim::Simulator& simulator, uint64_t seed);

}  // namespace czk::splice
