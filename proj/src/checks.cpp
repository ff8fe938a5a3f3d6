#include "czk/checks.hpp"

#include <cmath>

#include "czk/weights.hpp"

namespace czk::harness {

namespace {

// log Binomial(m, l) + l log rho + (m-l) log(1-rho)
double log_pmf(long m, long l, double rho) {
    double r = std::lgamma(double(m) + 1) - std::lgamma(double(l) + 1) -
               std::lgamma(double(m - l) + 1);
    if (l > 0) r += double(l) * std::log(rho);
    if (m - l > 0) r += double(m - l) * std::log1p(-rho);
    return r;
}

}  // namespace

WindowTail splice_window_tail(long m, int k, const Rat& rho) {
    if (m < 1 || k < 1) throw ConfigError("splice_window_tail: need m, k >= 1");
    if (rho <= 0 || rho > 1) throw ConfigError("splice_window_tail: need 0 < rho <= 1");
    if (m > 100000)
        throw ConfigError("splice_window_tail: m too large; use a closed-form bound instead");

    const Rat lo = (Rat(1) - Rat(1, k)) * rho * m;
    const Rat hi = (Rat(1) + Rat(1, k)) * rho * m;
    WindowTail out;
    out.chernoff = 2.0 * std::exp(-to_double(rho) * double(m) / (3.0 * double(k) * double(k)));

    auto outside = [&](long l, const Rat& wlo, const Rat& whi) {
        Rat rl(l);
        return !(wlo < rl && rl < whi);
    };

    if (m <= 20000) {
        out.exact_mode = true;
        // Integer terms over the common denominator d^m:
        //   term(l) = C(m, l) a^l b^(m-l),  rho = a/d,  b = d - a.
        BigInt a = numerator(rho), d = denominator(rho), b = d - a;
        if (b == 0) {  // rho == 1: the whole mass sits at l = m
            out.exact = outside(m, lo, hi) ? Rat(1) : Rat(0);
            out.shifted = outside(m, lo + 1, hi - 1) ? Rat(1) : Rat(0);
            out.value = to_double(out.exact);
            out.shifted_value = to_double(out.shifted);
            return out;
        }
        BigInt term = ipow(b, unsigned(m));
        BigInt sum_t = 0, sum_s = 0;
        for (long l = 0; l <= m; l++) {
            if (l > 0) {
                term *= a * (m - l + 1);
                term /= b * l;  // exact: term(l) is an integer
            }
            if (outside(l, lo, hi)) sum_t += term;
            if (outside(l, lo + 1, hi - 1)) sum_s += term;
        }
        BigInt dm = ipow(d, unsigned(m));
        out.exact = Rat(sum_t, dm);
        out.shifted = Rat(sum_s, dm);
        out.value = to_double(out.exact);
        out.shifted_value = to_double(out.shifted);
        return out;
    }

    out.exact_mode = false;
    double rho_d = to_double(rho);
    double total = 0, shifted = 0, comp_t = 0, comp_s = 0;
    for (long l = 0; l <= m; l++) {
        bool t_out = outside(l, lo, hi);
        bool s_out = outside(l, lo + 1, hi - 1);
        if (!t_out && !s_out) continue;
        double v = std::exp(log_pmf(m, l, rho_d));
        if (t_out) {  // Kahan summation
            double y = v - comp_t;
            double s = total + y;
            comp_t = (s - total) - y;
            total = s;
        }
        if (s_out) {
            double y = v - comp_s;
            double s = shifted + y;
            comp_s = (s - shifted) - y;
            shifted = s;
        }
    }
    out.value = total;
    out.shifted_value = shifted;
    return out;
}

FBoundGrid f_bound_grid(int max_k, int max_beta) {
    FBoundGrid out;
    for (int k = 1; k <= max_k; k++) {
        for (int beta = 1; beta <= max_beta; beta++) {
            WeightParams wp;
            wp.k = k;
            wp.N = 1;
            wp.beta = beta;
            for (int h = 1; h <= k; h++) {
                out.checked++;
                if (!wp.f_lower_bound_holds(h)) {
                    out.ok = false;
                    out.failures.push_back("k=" + std::to_string(k) + " beta=" +
                                           std::to_string(beta) + " h=" + std::to_string(h));
                }
            }
        }
    }
    return out;
}

}  // namespace czk::harness
