#pragma once

#include <optional>
#include <string>
#include <vector>

#include "czk/adversary.hpp"
#include "czk/weights.hpp"

namespace czk::tree {

struct StructuralViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One initiated m-block session. Siblings share (R, q); a vertex is activated
// when its second question is emitted and resolved when an acceptable t-block
// for it is consumed.
struct Vertex {
    int level = 0;        // 1..k
    long addr_a = 0;      // per-level creation index, 1-based
    int gen_order = 0;    // global creation order, 1-based; 0 is the dummy root
    int parent = 0;       // gen_order of the parent
    bool activated = false;
    bool resolved = false;
    Bytes group_history;  // hash input shared by the whole sibling group
    Bytes r_digest;
    Bytes R_digest;
    Bytes q_digest;
};

// Leveled tree of sessions with a dummy level-0 root. Either reconstructed
// from a query trace or built by hand for controls.
class ProofTree {
public:
    ProofTree(int k, int m, long N);

    int add_vertex(int level, int parent_gen, Bytes group_history = {}, Bytes r_digest = {},
                   Bytes R_digest = {}, Bytes q_digest = {});
    void mark_activated(int gen);
    void mark_resolved(int gen);

    int k() const { return k_; }
    int m() const { return m_; }
    long N() const { return N_; }
    int size() const { return int(vertices_.size()); }

    const Vertex& vertex(int gen) const { return vertices_.at(size_t(gen - 1)); }
    const std::vector<int>& children(int gen) const { return children_.at(size_t(gen)); }
    std::optional<int> at_address(int level, long a) const;
    std::vector<int> sibling_gens(int gen) const;  // excluding gen itself
    long level_count(int level) const { return long(by_level_.at(size_t(level - 1)).size()); }

private:
    int k_, m_;
    long N_;
    std::vector<Vertex> vertices_;
    std::vector<std::vector<int>> children_;  // index 0 = root
    std::vector<std::vector<int>> by_level_;  // [level-1] -> gens in creation order
};

enum class AddressClass { Good, Bad, Neither };
const char* class_name(AddressClass c);

// A vertex is interesting iff it was ever activated. Good: resolved with no
// sibling ever activated. Bad: activated and (unresolved or some sibling
// activated). Unoccupied addresses are Neither and carry zero weight.
bool is_interesting(const ProofTree& t, int gen);
AddressClass classify(const ProofTree& t, int gen);
AddressClass classify_address(const ProofTree& t, int level, long a);

// A head-to-leaf chain of interesting vertices; vertices[0] is the head, the
// last entry sits on level k. height = k - head level + 1.
struct Snake {
    std::vector<int> vertices;
    int height = 0;
};

// Canonical decomposition: a snake starts at every interesting vertex without
// an interesting parent; chains extend through the interesting child with the
// smallest generation order, and the remaining interesting children head new
// snakes. Throws StructuralViolation if an interesting non-leaf vertex has no
// interesting child (the schedule makes that impossible for real traces).
std::vector<Snake> decompose_snakes(const ProofTree& t);

struct WeightReport {
    Rat succeed, fail, interesting;
    struct Entry {
        int level;
        long a;
        AddressClass cls;
        Rat w;
    };
    std::vector<Entry> contributions;
};
WeightReport weights(const ProofTree& t, const WeightParams& wp);

struct CheckResult {
    bool ok = true;
    std::vector<std::string> violations;
};

// Decomposition properties: valid disjoint chains covering all interesting
// vertices, lone bad vertices are heads, at most one bad sibling per group
// sits in a body, interesting non-leaves have a resolved child, and siblings
// agree on (R, q).
CheckResult check_snake_decomposition(const ProofTree& t, const std::vector<Snake>& snakes);

// Pointwise bounds tying the weights to the decomposition:
//   FAIL        <= 2 * sum_sigma c f(h(sigma)) / N
//   INTERESTING >=     sum_sigma c F(h(sigma)) / N
struct SnakeBoundsResult {
    bool ok = true;
    Rat fail, interesting;
    Rat fail_bound, interesting_bound;
    Rat fail_margin, interesting_margin;
};
SnakeBoundsResult check_snake_weight_bounds(const ProofTree& t, const std::vector<Snake>& snakes,
                                            const WeightParams& wp);

// Short/long snake split (short: h < 10(beta+1)) gives the pointwise slack
// bound FAIL <= INTERESTING/5 + 2c(10(beta+1))^beta. When the tree contains a
// full-height snake, also check INTERESTING >= c F(k) / N.
struct SlackResult {
    bool ok = true;
    Rat fail, interesting, rhs, slack;
    bool has_full_height = false;
    bool full_height_ok = true;
    Rat full_height_floor;
};
SlackResult check_fail_slack(const ProofTree& t, const std::vector<Snake>& snakes,
                             const WeightParams& wp);

// Reconstructs the tree from an oracle trace. Every distinct r-path the
// verifier answered becomes exactly one vertex; activation and resolution
// flags replay the schedule semantics. Throws StructuralViolation on traces
// inconsistent with the schedule.
ProofTree build_tree(const std::vector<adversary::TraceRecord>& trace, int k, int m, long N);

// Canonical shape string (and digest) for distribution comparisons.
std::string fingerprint(const ProofTree& t);
std::string fingerprint_with_address(const ProofTree& t, int level, long a);

// One JSON record per vertex, for offline re-checking.
std::string dump_jsonl(const ProofTree& t);

}  // namespace czk::tree
