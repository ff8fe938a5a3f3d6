#include "czk/gi.hpp"

#include <set>

#include "czk/sha256.hpp"

namespace czk::gi {

namespace {

constexpr int kTapeBits = 64 + 1;  // nonce + challenge bit

const char* kBindTag = "czk.gi.bind.v1";

struct ParsedR {
    Graph committed;
    Bytes digest;
};

std::optional<ParsedR> parse_r(const GraphPair& p, const Bytes& r) {
    size_t mb = p.g0.mask_bytes();
    if (r.size() != mb + 16) return std::nullopt;
    auto g = Graph::from_mask(p.v(), ByteView(r.data(), mb));
    if (!g) return std::nullopt;
    return ParsedR{*g, Bytes(r.begin() + long(mb), r.end())};
}

}  // namespace

Instance make_instance(const GraphPair& p) {
    if (p.g0.v() != p.g1.v()) throw ConfigError("graph pair on different vertex sets");
    Bytes b;
    b.push_back(uint8_t(p.v()));
    append(b, p.g0.mask());
    append(b, p.g1.mask());
    return Instance{std::move(b), p.v()};
}

std::optional<GraphPair> parse_instance(const Instance& x) {
    if (x.input_x.empty()) return std::nullopt;
    int v = x.input_x[0];
    if (v < 1) return std::nullopt;
    Graph probe(v);
    size_t mb = probe.mask_bytes();
    if (x.input_x.size() != 1 + 2 * mb) return std::nullopt;
    auto g0 = Graph::from_mask(v, ByteView(x.input_x.data() + 1, mb));
    auto g1 = Graph::from_mask(v, ByteView(x.input_x.data() + 1 + mb, mb));
    if (!g0 || !g1) return std::nullopt;
    return GraphPair{*g0, *g1};
}

Bytes serialize_generated(const GeneratedInstance& gi) {
    Bytes b = make_instance(gi.pair).input_x;
    b.push_back(gi.isomorphic ? 1 : 0);
    b.push_back(gi.witness ? 1 : 0);
    if (gi.witness) append(b, gi.witness->pi);
    return b;
}

std::optional<GeneratedInstance> parse_generated(ByteView data) {
    if (data.empty()) return std::nullopt;
    int v = data[0];
    Graph probe(v);
    size_t mb = probe.mask_bytes();
    size_t base = 1 + 2 * mb;
    if (data.size() < base + 2) return std::nullopt;
    auto pair = parse_instance(Instance{Bytes(data.begin(), data.begin() + long(base)), v});
    if (!pair) return std::nullopt;
    GeneratedInstance out;
    out.pair = *pair;
    out.isomorphic = data[base] != 0;
    bool has_wit = data[base + 1] != 0;
    if (has_wit) {
        if (data.size() != base + 2 + size_t(v)) return std::nullopt;
        Perm pi(data.begin() + long(base) + 2, data.end());
        if (!is_perm(pi, v)) return std::nullopt;
        out.witness = Witness{pi};
    } else if (data.size() != base + 2) {
        return std::nullopt;
    }
    return out;
}

GeneratedInstance gen_instance(int v, bool isomorphic, uint64_t seed) {
    if (v < 3) throw ConfigError("gen_instance: need v >= 3");
    Rng rng(seed);
    if (isomorphic) {
        Graph g0(v);
        for (int i = 0; i < v; i++)
            for (int j = i + 1; j < v; j++)
                if (rng.bit()) g0.set_edge(i, j);
        Perm pi = random_perm(v, rng);
        GeneratedInstance out;
        out.pair = GraphPair{g0, g0.relabel(pi)};
        out.witness = Witness{pi};
        out.isomorphic = true;
        return out;
    }
    if (v > 8)
        throw ConfigError("gen_instance: exhaustive non-isomorphism check limited to v <= 8");
    for (;;) {
        Graph g0(v), g1(v);
        for (int i = 0; i < v; i++)
            for (int j = i + 1; j < v; j++) {
                if (rng.bit()) g0.set_edge(i, j);
                if (rng.bit()) g1.set_edge(i, j);
            }
        if (!find_isomorphism(g0, g1)) {
            GeneratedInstance out;
            out.pair = GraphPair{g0, g1};
            out.isomorphic = false;
            return out;
        }
    }
}

int GiProtocol::tape_bits(const Instance&) const { return kTapeBits; }

int GiProtocol::challenge_bit(const Tape& R) { return get_bit(R.bytes, 64); }

Bytes GiProtocol::first_challenge(const Instance& x, const Tape& R) const {
    check_tape(x, R);
    return Bytes(R.bytes.begin(), R.bytes.begin() + kNonceBytes);
}

Bytes GiProtocol::binding_digest(const Bytes& q, const Bytes& graph_mask) {
    Bytes buf(kBindTag, kBindTag + 14);
    append_framed(buf, q);
    append_framed(buf, graph_mask);
    return sha256_bytes(buf, 16);
}

Bytes GiProtocol::commit_message(const GraphPair& p, const Bytes& q, int choice,
                                 const Perm& sigma) {
    const Graph& base = choice == 0 ? p.g0 : p.g1;
    Graph committed = base.relabel(sigma);
    Bytes r = committed.mask();
    Bytes bind = binding_digest(q, r);
    append(r, bind);
    return r;
}

Bytes GiProtocol::second_challenge(const Instance& x, const Tape& R, const Bytes& r) const {
    check_tape(x, R);
    auto pair = parse_instance(x);
    if (!pair) throw ConfigError("second_challenge: undecodable instance");
    auto parsed = parse_r(*pair, r);
    Bytes q(R.bytes.begin(), R.bytes.begin() + kNonceBytes);
    if (!parsed || parsed->digest != binding_digest(q, parsed->committed.mask()))
        return Bytes{kRejectSentinel};
    return Bytes{uint8_t(challenge_bit(R))};
}

bool GiProtocol::accept(const Instance& x, const Bytes& q, const Bytes& r, const Bytes& s,
                        const Bytes& t) const {
    auto pair = parse_instance(x);
    if (!pair) return false;
    if (q.size() != kNonceBytes) return false;
    auto parsed = parse_r(*pair, r);
    if (!parsed || parsed->digest != binding_digest(q, parsed->committed.mask())) return false;
    if (s.size() != 1 || (s[0] != 0 && s[0] != 1)) return false;
    Perm tau(t.begin(), t.end());
    if (!is_perm(tau, pair->v())) return false;
    const Graph& base = s[0] == 0 ? pair->g0 : pair->g1;
    return base.relabel(tau) == parsed->committed;
}

std::pair<Bytes, ProverCopyState> prover_commit(const GraphPair& p, const Bytes& q,
                                                const Witness& w, Rng& coins) {
    if (!is_perm(w.pi, p.v()) || p.g0.relabel(w.pi) != p.g1)
        throw ConfigError("prover_commit: invalid witness");
    Perm sigma = random_perm(p.v(), coins);
    Bytes r = GiProtocol::commit_message(p, q, 1, sigma);
    return {std::move(r), ProverCopyState{std::move(sigma), q}};
}

Bytes prover_respond(const GraphPair& p, const ProverCopyState& st, const Witness& w,
                     const Bytes& s) {
    if (s.size() != 1 || (s[0] != 0 && s[0] != 1)) return {};  // reject-equivalent
    Perm tau = s[0] == 1 ? st.sigma : compose(st.sigma, w.pi);
    (void)p;
    return Bytes(tau.begin(), tau.end());
}

CheatStrategy best_cheating_prover(const GraphPair& p, const Bytes& q) {
    if (find_isomorphism(p.g0, p.g1))
        throw ConfigError("best_cheating_prover: isomorphic input (soundness test misuse)");
    // Certify that no commitment graph answers both challenges: the relabeling
    // orbits of g0 and g1 must be disjoint.
    std::set<Bytes> orbit0, orbit1;
    Perm perm = identity_perm(p.v());
    do {
        orbit0.insert(p.g0.relabel(perm).mask());
        orbit1.insert(p.g1.relabel(perm).mask());
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (const auto& mask : orbit0)
        if (orbit1.count(mask))
            throw ConfigError("best_cheating_prover: orbits intersect on non-isomorphic input");
    (void)q;
    CheatStrategy st;
    st.guess = 0;
    st.sigma = identity_perm(p.v());
    st.acceptance = Rat(1, 2);
    return st;
}

}  // namespace czk::gi
