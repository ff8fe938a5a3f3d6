#pragma once

#include "czk/bytes.hpp"
#include "czk/rational.hpp"
#include "czk/rng.hpp"

namespace czk {

// Address-sampling weights: a vertex of height h = k - i + 1 is picked with
// probability c * f(h) / N, where f(h) = h^beta, beta = 1 + ceil(log_k N) and
// c normalizes sum_{h=1..k} c*f(h) = 1. All arithmetic exact.
struct WeightParams {
    int k = 2;
    long N = 1;
    int beta = 1;
    Rat c;

    BigInt f(int h) const { return ipow(BigInt(h), unsigned(beta)); }

    BigInt F(int h) const {
        BigInt s = 0;
        for (int j = 1; j <= h; j++) s += f(j);
        return s;
    }

    int height(int level) const { return k - level + 1; }

    // c * f(k - i + 1) / N
    Rat address_weight(int level) const { return c * Rat(f(height(level)), N); }

    // F(h) >= h^{beta+1} / (beta+1), checked exactly.
    bool f_lower_bound_holds(int h) const {
        return F(h) * (beta + 1) >= ipow(BigInt(h), unsigned(beta) + 1);
    }
};

inline WeightParams weight_params(int k, long N) {
    if (k < 2) throw ConfigError("weight_params: need k >= 2");
    if (N < 1) throw ConfigError("weight_params: need N >= 1");
    int e = 0;
    BigInt pw = 1;
    while (pw < N) {
        pw *= k;
        e++;
    }
    WeightParams wp;
    wp.k = k;
    wp.N = N;
    wp.beta = 1 + e;
    BigInt denom = 0;
    for (int h = 1; h <= k; h++) denom += wp.f(h);
    wp.c = Rat(1, denom);
    return wp;
}

struct Address {
    int level = 1;  // i
    long a = 1;     // generation index within the level
};

// Level i with probability c*f(k-i+1), then a uniform in 1..N.
inline Address sample_address(const WeightParams& wp, Rng& rng) {
    double u = rng.unit();
    double cum = 0;
    int level = wp.k;
    for (int i = 1; i <= wp.k; i++) {
        cum += to_double(wp.address_weight(i)) * double(wp.N);
        if (u < cum) {
            level = i;
            break;
        }
    }
    long a = long(rng.below(uint64_t(wp.N))) + 1;
    return Address{level, a};
}

}  // namespace czk
