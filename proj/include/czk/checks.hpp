#pragma once

#include <string>
#include <vector>

#include "czk/rational.hpp"

namespace czk::harness {

// Tail of Binomial(m, rho) outside the window ((1-1/k)rho m, (1+1/k)rho m)
// (strict bounds). This is the probability that replacing one block
// coordinate shifts the splice distributions multiplicatively by more than
// 1 +- 1/k. `shifted` shrinks the window by one on each side, covering the
// one-entry difference of the modified measure.
struct WindowTail {
    Rat exact;            // exact rational tail probability (exact mode)
    Rat shifted;          // shrunk-window bound for the modified measure
    double value = 0;     // tail as double (both modes)
    double shifted_value = 0;
    double chernoff = 0;  // 2 exp(-rho m / (3 k^2)) reference bound
    bool exact_mode = true;
    bool below(double threshold) const { return value < threshold; }
};

// m <= 20000 is summed in exact rationals; larger m uses compensated
// log-space summation; m > 100000 is refused.
WindowTail splice_window_tail(long m, int k, const Rat& rho);

// F(h) >= h^{beta+1}/(beta+1) over a full parameter grid, exact arithmetic.
struct FBoundGrid {
    bool ok = true;
    std::vector<std::string> failures;
    long checked = 0;
};
FBoundGrid f_bound_grid(int max_k, int max_beta);

}  // namespace czk::harness
