#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "czk/bytes.hpp"
#include "czk/rng.hpp"

namespace czk {

using Perm = std::vector<uint8_t>;  // images: p[i] = image of vertex i

// Simple undirected graph on v vertices, stored as the upper-triangular
// adjacency bitmask, row-major: bit index of edge (i, j), i < j, is
// sum_{a<i}(v-1-a) + (j-i-1). This is also the wire layout.
class Graph {
public:
    Graph() = default;
    explicit Graph(int v) : v_(v), bits_((size_t(v) * (v - 1) / 2 + 7) / 8, 0) {}

    int v() const { return v_; }
    size_t edge_bits() const { return size_t(v_) * (v_ - 1) / 2; }
    size_t mask_bytes() const { return (edge_bits() + 7) / 8; }

    static size_t edge_index(int v, int i, int j) {
        if (i > j) std::swap(i, j);
        return size_t(i) * (2 * v - i - 1) / 2 + size_t(j - i - 1);
    }

    bool edge(int i, int j) const {
        if (i == j) return false;
        return get_bit(bits_, edge_index(v_, i, j)) != 0;
    }

    void set_edge(int i, int j, bool on = true) {
        if (i == j) throw ConfigError("self-loop");
        set_bit(bits_, edge_index(v_, i, j), on ? 1 : 0);
    }

    const Bytes& mask() const { return bits_; }

    static std::optional<Graph> from_mask(int v, ByteView mask) {
        Graph g(v);
        if (mask.size() != g.mask_bytes()) return std::nullopt;
        g.bits_.assign(mask.begin(), mask.end());
        size_t spare = g.mask_bytes() * 8 - g.edge_bits();
        if (spare > 0 && !g.bits_.empty() && (g.bits_.back() >> (8 - spare)) != 0)
            return std::nullopt;  // non-canonical padding
        return g;
    }

    Graph relabel(const Perm& p) const {
        Graph out(v_);
        for (int i = 0; i < v_; i++)
            for (int j = i + 1; j < v_; j++)
                if (edge(i, j)) out.set_edge(p[i], p[j]);
        return out;
    }

    std::vector<int> degree_sequence() const {
        std::vector<int> deg(v_, 0);
        for (int i = 0; i < v_; i++)
            for (int j = i + 1; j < v_; j++)
                if (edge(i, j)) {
                    deg[i]++;
                    deg[j]++;
                }
        std::sort(deg.begin(), deg.end());
        return deg;
    }

    bool operator==(const Graph& o) const = default;

private:
    int v_ = 0;
    Bytes bits_;
};

inline Perm identity_perm(int v) {
    Perm p(v);
    for (int i = 0; i < v; i++) p[i] = uint8_t(i);
    return p;
}

inline Perm random_perm(int v, Rng& rng) {
    Perm p = identity_perm(v);
    for (int i = v - 1; i > 0; i--) std::swap(p[i], p[size_t(rng.below(uint64_t(i) + 1))]);
    return p;
}

inline Perm compose(const Perm& outer, const Perm& inner) {
    Perm r(inner.size());
    for (size_t i = 0; i < inner.size(); i++) r[i] = outer[inner[i]];
    return r;
}

inline bool is_perm(const Perm& p, int v) {
    if (int(p.size()) != v) return false;
    std::vector<bool> seen(v, false);
    for (uint8_t x : p) {
        if (x >= v || seen[x]) return false;
        seen[x] = true;
    }
    return true;
}

// Exhaustive isomorphism search with a degree-sequence gate. Intended for
// v <= 8 (8! = 40320 candidates).
inline std::optional<Perm> find_isomorphism(const Graph& a, const Graph& b) {
    if (a.v() != b.v()) return std::nullopt;
    if (a.degree_sequence() != b.degree_sequence()) return std::nullopt;
    Perm p = identity_perm(a.v());
    do {
        if (a.relabel(p) == b) return p;
    } while (std::next_permutation(p.begin(), p.end()));
    return std::nullopt;
}

// Named fixtures.
inline Graph cycle_graph(int v) {
    Graph g(v);
    for (int i = 0; i < v; i++) g.set_edge(i, (i + 1) % v);
    return g;
}

inline Graph two_triangles() {
    Graph g(6);
    g.set_edge(0, 1);
    g.set_edge(1, 2);
    g.set_edge(2, 0);
    g.set_edge(3, 4);
    g.set_edge(4, 5);
    g.set_edge(5, 3);
    return g;
}

inline Graph path_graph(int v) {
    Graph g(v);
    for (int i = 0; i + 1 < v; i++) g.set_edge(i, i + 1);
    return g;
}

}  // namespace czk
