#pragma once

#include <memory>

#include "czk/adversary.hpp"
#include "czk/gi.hpp"

namespace czk::sim {

enum class SimKind { WitnessOracle, Rewinding };

SimKind sim_kind_from_name(const std::string& name);
const char* sim_kind_name(SimKind k);

// Outcome summary of one simulator run. The query trace lives in the oracle;
// completed means the final reply was Accept. A step-cap truncation leaves
// completed=false with the trace cut short ("Capped" is the oracle's cap).
struct SimRun {
    bool completed = false;
    long steps = 0;
    std::vector<long> block_attempts;  // per level, rewinding bookkeeping
};

// Black-box discipline: a simulator sees nothing but the oracle's
// prefix-query surface. It must never touch H or verifier internals.
class Simulator {
public:
    virtual ~Simulator() = default;
    virtual SimRun run(adversary::AdversaryOracle& oracle, uint64_t seed) = 0;
};

// Ideal single-pass simulator: plays the honest prover with the witness.
// Produces a single root-to-leaf path, all vertices resolved, in exactly
// 2k + 1 queries. Without a witness it refuses to play (empty run).
class WitnessOracleSim final : public Simulator {
public:
    WitnessOracleSim(gi::GraphPair pair, std::optional<gi::Witness> witness)
        : pair_(std::move(pair)), witness_(std::move(witness)) {}
    SimRun run(adversary::AdversaryOracle& oracle, uint64_t seed) override;

private:
    gi::GraphPair pair_;
    std::optional<gi::Witness> witness_;
};

// Witness-free simulator: guesses the m challenge bits of a block before
// committing, commits consistently with the guess, and on a wrong guess
// rewinds to the start of the innermost unresolved block with fresh guesses.
// Never forwards a rejecting t (it checks its guess first). Per-block success
// is 2^-m, and the nested schedule forces re-resolution of everything below a
// rewound block — the concurrent blowup the bench measures.
class RewindingSim final : public Simulator {
public:
    explicit RewindingSim(gi::GraphPair pair) : pair_(std::move(pair)) {}
    SimRun run(adversary::AdversaryOracle& oracle, uint64_t seed) override;

private:
    gi::GraphPair pair_;
};

std::unique_ptr<Simulator> make_simulator(SimKind kind, const gi::GeneratedInstance& inst);

}  // namespace czk::sim
