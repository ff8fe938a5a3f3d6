#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace czk {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt ipow(BigInt base, unsigned exp) {
    BigInt r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; i++) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string rat_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace czk
