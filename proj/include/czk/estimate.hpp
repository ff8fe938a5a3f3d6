#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "czk/bytes.hpp"
#include "czk/rational.hpp"

namespace czk::harness {

// Wilson 95% interval: robust at small trial counts.
struct Estimate {
    double point = 0;
    double ci_low = 0;
    double ci_high = 0;
    long trials = 0;
    long successes = 0;
};

Estimate wilson(long successes, long trials);

struct Chi2Result {
    double stat = 0;
    long dof = 0;
    double p_value = 1.0;
    long cells = 0;    // cells used after pooling
    long pooled = 0;   // categories folded into the tail cell
};

// Upper tail of the chi-squared distribution.
double chi2_sf(double stat, long dof);

// Two-sample test over category counts; categories with small combined counts
// are pooled into one tail cell.
Chi2Result chi2_two_sample(const std::map<std::string, long>& a,
                           const std::map<std::string, long>& b, double min_expected = 5.0);

// Goodness of fit of observed counts against exact cell probabilities.
Chi2Result chi2_goodness_of_fit(const std::vector<long>& observed,
                                const std::vector<Rat>& probs);

// Deterministic parallel Monte Carlo: trial i runs on a seed derived from
// (master, domain, i); results are combined in index order, so reports are
// byte-identical no matter how many workers ran.
std::vector<char> run_bool_trials(long trials, uint64_t master, const std::string& domain,
                                  const std::function<bool(long, uint64_t)>& trial, int workers);

template <typename T>
std::vector<T> run_trials(long trials, uint64_t master, const std::string& domain,
                          const std::function<T(long, uint64_t)>& trial, int workers);

Estimate mc_estimate(long trials, uint64_t master, const std::string& domain,
                     const std::function<bool(long, uint64_t)>& event, int workers);

int default_workers();

}  // namespace czk::harness
