#include "czk/proof_tree.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "czk/sha256.hpp"

#include "json.hpp"

namespace czk::tree {

ProofTree::ProofTree(int k, int m, long N) : k_(k), m_(m), N_(N) {
    if (k < 1 || m < 1 || N < 1) throw ConfigError("proof tree needs k, m, N >= 1");
    children_.resize(1);  // dummy root
    by_level_.resize(size_t(k));
}

int ProofTree::add_vertex(int level, int parent_gen, Bytes group_history, Bytes r_digest,
                          Bytes R_digest, Bytes q_digest) {
    if (level < 1 || level > k_) throw StructuralViolation("vertex level out of range");
    if (parent_gen < 0 || parent_gen > size()) throw StructuralViolation("unknown parent");
    if (parent_gen == 0) {
        if (level != 1) throw StructuralViolation("only level-1 vertices hang off the root");
    } else if (vertex(parent_gen).level != level - 1) {
        throw StructuralViolation("parent level mismatch");
    }
    if (level_count(level) >= N_)
        throw StructuralViolation("more than N vertices on one level");
    Vertex v;
    v.level = level;
    v.parent = parent_gen;
    v.gen_order = size() + 1;
    v.addr_a = level_count(level) + 1;
    v.group_history = std::move(group_history);
    v.r_digest = std::move(r_digest);
    v.R_digest = std::move(R_digest);
    v.q_digest = std::move(q_digest);
    vertices_.push_back(std::move(v));
    children_.push_back({});
    children_[size_t(parent_gen)].push_back(size());
    by_level_[size_t(level - 1)].push_back(size());
    return size();
}

void ProofTree::mark_activated(int gen) { vertices_.at(size_t(gen - 1)).activated = true; }

void ProofTree::mark_resolved(int gen) {
    vertices_.at(size_t(gen - 1)).resolved = true;
    vertices_.at(size_t(gen - 1)).activated = true;
}

std::optional<int> ProofTree::at_address(int level, long a) const {
    if (level < 1 || level > k_ || a < 1) return std::nullopt;
    const auto& lst = by_level_[size_t(level - 1)];
    if (a > long(lst.size())) return std::nullopt;
    return lst[size_t(a - 1)];
}

std::vector<int> ProofTree::sibling_gens(int gen) const {
    std::vector<int> out;
    for (int c : children(vertex(gen).parent))
        if (c != gen) out.push_back(c);
    return out;
}

const char* class_name(AddressClass c) {
    switch (c) {
        case AddressClass::Good: return "good";
        case AddressClass::Bad: return "bad";
        case AddressClass::Neither: return "neither";
    }
    return "?";
}

bool is_interesting(const ProofTree& t, int gen) { return t.vertex(gen).activated; }

AddressClass classify(const ProofTree& t, int gen) {
    const Vertex& v = t.vertex(gen);
    bool sibling_activated = false;
    for (int s : t.sibling_gens(gen))
        if (t.vertex(s).activated) sibling_activated = true;
    if (v.resolved && !sibling_activated) return AddressClass::Good;
    if (v.activated) return AddressClass::Bad;
    return AddressClass::Neither;
}

AddressClass classify_address(const ProofTree& t, int level, long a) {
    auto gen = t.at_address(level, a);
    return gen ? classify(t, *gen) : AddressClass::Neither;
}

std::vector<Snake> decompose_snakes(const ProofTree& t) {
    std::vector<Snake> out;
    std::deque<int> heads;
    for (int g = 1; g <= t.size(); g++) {
        if (!is_interesting(t, g)) continue;
        int p = t.vertex(g).parent;
        if (p == 0 || !is_interesting(t, p)) heads.push_back(g);
    }
    while (!heads.empty()) {
        int head = heads.front();
        heads.pop_front();
        Snake s;
        s.height = t.k() - t.vertex(head).level + 1;
        int cur = head;
        s.vertices.push_back(cur);
        while (t.vertex(cur).level < t.k()) {
            std::vector<int> next;
            for (int c : t.children(cur))
                if (is_interesting(t, c)) next.push_back(c);
            if (next.empty())
                throw StructuralViolation(
                    "interesting vertex at level " + std::to_string(t.vertex(cur).level) +
                    " (gen " + std::to_string(cur) + ") has no interesting child");
            std::sort(next.begin(), next.end());
            cur = next.front();
            for (size_t i = 1; i < next.size(); i++) heads.push_back(next[i]);
            s.vertices.push_back(cur);
        }
        out.push_back(std::move(s));
    }
    return out;
}

WeightReport weights(const ProofTree& t, const WeightParams& wp) {
    if (wp.k != t.k()) throw ConfigError("weights: parameter k does not match the tree");
    WeightReport rep;
    rep.succeed = rep.fail = rep.interesting = Rat(0);
    for (int g = 1; g <= t.size(); g++) {
        AddressClass cls = classify(t, g);
        if (cls == AddressClass::Neither) continue;
        const Vertex& v = t.vertex(g);
        Rat w = wp.address_weight(v.level);
        rep.interesting += w;
        if (cls == AddressClass::Good)
            rep.succeed += w;
        else
            rep.fail += w;
        rep.contributions.push_back({v.level, v.addr_a, cls, w});
    }
    return rep;
}

CheckResult check_snake_decomposition(const ProofTree& t, const std::vector<Snake>& snakes) {
    CheckResult res;
    auto flag = [&](std::string why) {
        res.ok = false;
        res.violations.push_back(std::move(why));
    };

    std::map<int, int> owner;  // gen -> snake index
    std::set<int> body_members;
    for (size_t si = 0; si < snakes.size(); si++) {
        const Snake& s = snakes[si];
        if (s.vertices.empty()) {
            flag("empty snake");
            continue;
        }
        if (t.vertex(s.vertices.back()).level != t.k())
            flag("snake does not end on the bottom level");
        if (s.height != t.k() - t.vertex(s.vertices.front()).level + 1)
            flag("snake height mismatch");
        for (size_t i = 0; i < s.vertices.size(); i++) {
            int g = s.vertices[i];
            if (!is_interesting(t, g)) flag("snake contains a non-interesting vertex");
            if (owner.count(g)) flag("snakes are not disjoint");
            owner[g] = int(si);
            if (i > 0) {
                body_members.insert(g);
                if (t.vertex(g).parent != s.vertices[i - 1])
                    flag("snake body breaks the parent/child chain");
            }
        }
    }

    for (int g = 1; g <= t.size(); g++) {
        if (is_interesting(t, g) && !owner.count(g))
            flag("interesting vertex gen " + std::to_string(g) + " not covered by any snake");
    }

    // Bad-vertex head rules.
    for (int g = 1; g <= t.size(); g++) {
        if (classify(t, g) != AddressClass::Bad) continue;
        bool has_bad_sibling = false;
        for (int s : t.sibling_gens(g))
            if (classify(t, s) == AddressClass::Bad) has_bad_sibling = true;
        if (!has_bad_sibling && body_members.count(g))
            flag("lone bad vertex gen " + std::to_string(g) + " sits in a snake body");
    }
    for (int parent = 0; parent <= t.size(); parent++) {
        if (parent > 0 && t.vertex(parent).level >= t.k()) continue;
        int bad_in_body = 0;
        for (int c : t.children(parent))
            if (classify(t, c) == AddressClass::Bad && body_members.count(c)) bad_in_body++;
        if (bad_in_body > 1) flag("more than one bad sibling in snake bodies");
    }

    // Structure forced by the schedule plus sibling parameter equality.
    for (int g = 1; g <= t.size(); g++) {
        const Vertex& v = t.vertex(g);
        if (is_interesting(t, g) && v.level < t.k()) {
            bool has_resolved_child = false;
            for (int c : t.children(g))
                if (t.vertex(c).resolved) has_resolved_child = true;
            if (!has_resolved_child)
                flag("interesting non-leaf gen " + std::to_string(g) + " has no resolved child");
        }
        if (v.resolved && !v.activated) flag("resolved vertex that was never activated");
        for (int s : t.sibling_gens(g)) {
            const Vertex& w = t.vertex(s);
            if (!v.R_digest.empty() && !w.R_digest.empty() && v.R_digest != w.R_digest)
                flag("siblings disagree on R");
            if (!v.q_digest.empty() && !w.q_digest.empty() && v.q_digest != w.q_digest)
                flag("siblings disagree on q");
        }
    }
    return res;
}

SnakeBoundsResult check_snake_weight_bounds(const ProofTree& t, const std::vector<Snake>& snakes,
                                            const WeightParams& wp) {
    SnakeBoundsResult res;
    WeightReport rep = weights(t, wp);
    res.fail = rep.fail;
    res.interesting = rep.interesting;
    res.fail_bound = Rat(0);
    res.interesting_bound = Rat(0);
    for (const Snake& s : snakes) {
        res.fail_bound += 2 * wp.c * Rat(wp.f(s.height), wp.N);
        res.interesting_bound += wp.c * Rat(wp.F(s.height), wp.N);
    }
    res.fail_margin = res.fail_bound - res.fail;
    res.interesting_margin = res.interesting - res.interesting_bound;
    res.ok = res.fail_margin >= 0 && res.interesting_margin >= 0;
    return res;
}

SlackResult check_fail_slack(const ProofTree& t, const std::vector<Snake>& snakes,
                             const WeightParams& wp) {
    SlackResult res;
    WeightReport rep = weights(t, wp);
    res.fail = rep.fail;
    res.interesting = rep.interesting;
    Rat constant = 2 * wp.c * Rat(ipow(BigInt(10 * (wp.beta + 1)), unsigned(wp.beta)), 1);
    res.rhs = res.interesting / 5 + constant;
    res.slack = res.rhs - res.fail;
    res.ok = res.slack >= 0;
    res.full_height_floor = wp.c * Rat(wp.F(wp.k), wp.N);
    for (const Snake& s : snakes)
        if (s.height == t.k()) res.has_full_height = true;
    if (res.has_full_height) res.full_height_ok = res.interesting >= res.full_height_floor;
    return res;
}

ProofTree build_tree(const std::vector<adversary::TraceRecord>& trace, int k, int m, long N) {
    ProofTree t(k, m, N);
    std::map<Bytes, int> by_path;  // encoded r-path -> gen
    for (const auto& rec : trace) {
        using adversary::ReplyKind;
        if (rec.kind == ReplyKind::QueryError) continue;
        size_t p = rec.prefix.rs.size();
        if (p > size_t(k)) throw StructuralViolation("trace has a prefix deeper than k");

        // visit/create the vertices along the r-path
        Bytes key;
        int parent = 0;
        std::vector<int> path;
        for (size_t i = 0; i < p; i++) {
            append_block(key, rec.prefix.rs[i]);
            auto it = by_path.find(key);
            int gen;
            if (it != by_path.end()) {
                gen = it->second;
            } else {
                if (rec.levels.size() <= i)
                    throw StructuralViolation("trace record missing level parameters");
                Bytes rdig;
                {
                    Bytes rb;
                    append_block(rb, rec.prefix.rs[i]);
                    rdig = sha256_bytes(rb);
                }
                gen = t.add_vertex(int(i) + 1, parent, rec.levels[i].history, rdig,
                                   rec.levels[i].R_digest, rec.levels[i].q_digest);
                by_path.emplace(key, gen);
            }
            path.push_back(gen);
            parent = gen;
        }

        // replay the activation/resolution consequences of the reply
        int act_from = 0, res_from = 0;  // levels act_from..k activated, res_from..k resolved
        switch (rec.kind) {
            case ReplyKind::NextQ:
                break;
            case ReplyKind::NextS:
                act_from = rec.session;
                res_from = rec.session + 1;
                break;
            case ReplyKind::Accept:
                act_from = 1;
                res_from = 1;
                break;
            case ReplyKind::Abort:
                act_from = rec.session;
                res_from = rec.session + 1;
                break;
            case ReplyKind::QueryError:
                break;
        }
        if (act_from > 0) {
            if (p != size_t(k)) throw StructuralViolation("resolution reply on a short prefix");
            for (int lev = act_from; lev <= k; lev++) t.mark_activated(path[size_t(lev - 1)]);
            for (int lev = res_from; lev <= k; lev++) t.mark_resolved(path[size_t(lev - 1)]);
        }
    }
    return t;
}

std::string fingerprint(const ProofTree& t) {
    std::ostringstream out;
    out << t.k() << ';' << t.m();
    for (int g = 1; g <= t.size(); g++) {
        const Vertex& v = t.vertex(g);
        out << ";(" << v.level << ',' << v.parent << ',' << int(v.activated) << ','
            << int(v.resolved) << ')';
    }
    return out.str();
}

std::string fingerprint_with_address(const ProofTree& t, int level, long a) {
    std::ostringstream out;
    out << fingerprint(t) << ";addr=(" << level << ',' << a
        << "):" << class_name(classify_address(t, level, a));
    return out.str();
}

std::string dump_jsonl(const ProofTree& t) {
    std::ostringstream out;
    for (int g = 1; g <= t.size(); g++) {
        const Vertex& v = t.vertex(g);
        nlohmann::json j{{"gen", v.gen_order},
                         {"level", v.level},
                         {"a", v.addr_a},
                         {"parent", v.parent},
                         {"activated", v.activated},
                         {"resolved", v.resolved},
                         {"class", class_name(classify(t, g))},
                         {"r", to_hex(v.r_digest)},
                         {"R", to_hex(v.R_digest)},
                         {"q", to_hex(v.q_digest)}};
        out << j.dump() << '\n';
    }
    return out.str();
}

}  // namespace czk::tree
