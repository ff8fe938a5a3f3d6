#pragma once

#include <optional>

#include "czk/graph.hpp"
#include "czk/protocol.hpp"
#include "czk/rational.hpp"

namespace czk::gi {

struct GraphPair {
    Graph g0, g1;
    int v() const { return g0.v(); }
};

struct Witness {
    Perm pi;  // pi(g0) == g1
};

struct GeneratedInstance {
    GraphPair pair;
    std::optional<Witness> witness;
    bool isomorphic = false;
};

// Canonical statement bytes: u8 v || mask(g0) || mask(g1). size_n = v.
Instance make_instance(const GraphPair& p);
std::optional<GraphPair> parse_instance(const Instance& x);

// Instance file record: statement bytes, then u8 iso, u8 has_witness,
// v witness bytes when present.
Bytes serialize_generated(const GeneratedInstance& gi);
std::optional<GeneratedInstance> parse_generated(ByteView data);

// Test-fixture generation. For isomorphic=false the non-isomorphism is
// certified by exhaustive permutation search, so v <= 8 is required there.
GeneratedInstance gen_instance(int v, bool isomorphic, uint64_t seed);

// The 4-message verifier-first proof for Graph Isomorphism.
//
// Per-copy tape: 65 bits = 64-bit nonce q || 1 challenge bit.
//   q = nonce. The prover must bind q into its commitment, which makes the
//       first verifier move load-bearing (r depends on q).
//   r = mask(sigma(g1)) || 16-byte binding digest over (q, mask).
//   s = one byte, 0 or 1; 0xff is the reject sentinel for malformed r.
//   t = permutation tau as v image bytes; accepted iff tau(g_s) == committed
//       graph and the binding verifies.
class GiProtocol final : public Protocol {
public:
    static constexpr int kNonceBytes = 8;
    static constexpr uint8_t kRejectSentinel = 0xff;

    int tape_bits(const Instance& x) const override;
    Bytes first_challenge(const Instance& x, const Tape& R) const override;
    Bytes second_challenge(const Instance& x, const Tape& R, const Bytes& r) const override;
    bool accept(const Instance& x, const Bytes& q, const Bytes& r, const Bytes& s,
                const Bytes& t) const override;

    static int challenge_bit(const Tape& R);
    static Bytes binding_digest(const Bytes& q, const Bytes& graph_mask);
    // Commitment to sigma(g_choice) bound to q. Witness-free; used by honest
    // provers (choice=1) and by challenge-guessing strategies.
    static Bytes commit_message(const GraphPair& p, const Bytes& q, int choice, const Perm& sigma);
};

struct ProverCopyState {
    Perm sigma;
    Bytes q;  // nonce the commitment is bound to
};

// Honest prover moves. prover_commit validates the witness (fixture misuse is
// an error); prover_respond answers both challenges via sigma / sigma o pi.
std::pair<Bytes, ProverCopyState> prover_commit(const GraphPair& p, const Bytes& q,
                                                const Witness& w, Rng& coins);
Bytes prover_respond(const GraphPair& p, const ProverCopyState& st, const Witness& w,
                     const Bytes& s);

// Optimal cheating strategy on a non-isomorphic pair: commit to a relabeling
// of g_guess and answer only that challenge. Exhaustive orbit computation
// certifies that no commitment answers both challenges, so the acceptance
// probability is exactly 1/2.
struct CheatStrategy {
    int guess = 0;
    Perm sigma;
    Rat acceptance;  // exact
};
CheatStrategy best_cheating_prover(const GraphPair& p, const Bytes& q);

}  // namespace czk::gi
