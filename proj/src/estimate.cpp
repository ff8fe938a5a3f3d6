#include "czk/estimate.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "czk/rng.hpp"

namespace czk::harness {

Estimate wilson(long successes, long trials) {
    if (trials <= 0) throw ConfigError("wilson: need trials >= 1");
    const double z = 1.959963984540054;  // 97.5th normal quantile
    double n = double(trials);
    double p = double(successes) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    Estimate e;
    e.point = p;
    e.ci_low = std::max(0.0, center - half);
    e.ci_high = std::min(1.0, center + half);
    e.trials = trials;
    e.successes = successes;
    return e;
}

double chi2_sf(double stat, long dof) {
    if (dof <= 0) return 1.0;
    return boost::math::gamma_q(double(dof) / 2.0, stat / 2.0);
}

Chi2Result chi2_two_sample(const std::map<std::string, long>& a,
                           const std::map<std::string, long>& b, double min_expected) {
    long na = 0, nb = 0;
    std::map<std::string, std::pair<long, long>> cells;
    for (const auto& [key, cnt] : a) {
        cells[key].first += cnt;
        na += cnt;
    }
    for (const auto& [key, cnt] : b) {
        cells[key].second += cnt;
        nb += cnt;
    }
    if (na == 0 || nb == 0) throw ConfigError("chi2_two_sample: empty sample");

    // pool cells whose combined count is too small for the approximation
    std::vector<std::pair<long, long>> used;
    long pool_a = 0, pool_b = 0, pooled = 0;
    double total = double(na + nb);
    for (const auto& [key, pair] : cells) {
        double expected_min =
            double(pair.first + pair.second) * std::min(na, nb) / total;
        if (expected_min < min_expected) {
            pool_a += pair.first;
            pool_b += pair.second;
            pooled++;
        } else {
            used.push_back(pair);
        }
    }
    if (pool_a + pool_b > 0) used.push_back({pool_a, pool_b});

    // K-sample chi-square with unequal sample sizes
    double k1 = std::sqrt(double(nb) / double(na));
    double k2 = std::sqrt(double(na) / double(nb));
    double stat = 0;
    for (const auto& [ca, cb] : used) {
        double d = k1 * double(ca) - k2 * double(cb);
        stat += d * d / double(ca + cb);
    }
    Chi2Result res;
    res.stat = stat;
    res.cells = long(used.size());
    res.pooled = pooled;
    res.dof = std::max<long>(1, long(used.size()) - 1);
    res.p_value = chi2_sf(stat, res.dof);
    return res;
}

Chi2Result chi2_goodness_of_fit(const std::vector<long>& observed,
                                const std::vector<Rat>& probs) {
    if (observed.size() != probs.size() || observed.empty())
        throw ConfigError("chi2_goodness_of_fit: shape mismatch");
    long n = 0;
    for (long c : observed) n += c;
    double stat = 0;
    for (size_t i = 0; i < observed.size(); i++) {
        double expected = to_double(probs[i]) * double(n);
        if (expected <= 0) throw ConfigError("chi2_goodness_of_fit: zero-probability cell");
        double d = double(observed[i]) - expected;
        stat += d * d / expected;
    }
    Chi2Result res;
    res.stat = stat;
    res.cells = long(observed.size());
    res.dof = long(observed.size()) - 1;
    res.p_value = chi2_sf(stat, res.dof);
    return res;
}

int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

template <typename T>
std::vector<T> run_trials(long trials, uint64_t master, const std::string& domain,
                          const std::function<T(long, uint64_t)>& trial, int workers) {
    auto results = std::vector<T>(size_t(trials));
    if (workers < 1) workers = 1;
    if (workers == 1) {
        for (long i = 0; i < trials; i++)
            results[size_t(i)] = trial(i, derive_seed(master, domain, uint64_t(i)));
        return results;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    for (int w = 0; w < workers; w++) {
        pool.emplace_back([&] {
            for (;;) {
                long i = next.fetch_add(1);
                if (i >= trials) return;
                try {
                    results[size_t(i)] = trial(i, derive_seed(master, domain, uint64_t(i)));
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!first_error) first_error = std::current_exception();
                    next.store(trials);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

template std::vector<char> run_trials<char>(long, uint64_t, const std::string&,
                                            const std::function<char(long, uint64_t)>&, int);
template std::vector<long> run_trials<long>(long, uint64_t, const std::string&,
                                            const std::function<long(long, uint64_t)>&, int);
template std::vector<double> run_trials<double>(long, uint64_t, const std::string&,
                                                const std::function<double(long, uint64_t)>&,
                                                int);
template std::vector<std::string> run_trials<std::string>(
    long, uint64_t, const std::string&, const std::function<std::string(long, uint64_t)>&, int);

std::vector<char> run_bool_trials(long trials, uint64_t master, const std::string& domain,
                                  const std::function<bool(long, uint64_t)>& trial, int workers) {
    return run_trials<char>(trials, master, domain,
                            [&](long i, uint64_t s) { return char(trial(i, s) ? 1 : 0); },
                            workers);
}

Estimate mc_estimate(long trials, uint64_t master, const std::string& domain,
                     const std::function<bool(long, uint64_t)>& event, int workers) {
    if (trials < 1) throw ConfigError("mc_estimate: need trials >= 1");
    auto results = run_bool_trials(trials, master, domain, event, workers);
    long hits = 0;
    for (char c : results) hits += c;
    return wilson(hits, trials);
}

}  // namespace czk::harness
