// Bounded multiplicative functions: spec-driven definition and tabulation,
// pretentious distance, Wirsing-style mean reports, short-vs-long average
// comparison, sign changes, and smooth numbers in short intervals.
#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "liouville/common.hpp"

namespace liouville::multfunc {

struct MultiplicativeFunctionSpec {
    enum class Kind { completely_multiplicative, multiplicative };
    enum class PrimeRule { minus_one, plus_one, smooth_indicator, table };

    Kind kind = Kind::completely_multiplicative;
    PrimeRule prime_rule = PrimeRule::minus_one;
    std::string name = "lambda";
    double smooth_bound = 0.0;  // smooth_indicator: f(p) = [p <= bound]
    std::unordered_map<u64, double> prime_table;
    // multiplicative kind only: explicit f(p^k) for k >= 2. Key (p << 6) | k.
    // Named builtins mu / mu2 use zero_at_higher instead.
    bool zero_at_higher = false;
    std::unordered_map<u64, double> power_table;

    double prime_value(u64 p) const;
    // f(p^k); completely multiplicative defaults to f(p)^k. Throws when a
    // needed rule is missing or |f| > 1.
    double prime_power_value(u64 p, u32 k) const;

    // lambda | mu | mu2 | one | smooth:Y
    static MultiplicativeFunctionSpec builtin(const std::string& name);
    static MultiplicativeFunctionSpec from_json_text(const std::string& text);
    static MultiplicativeFunctionSpec from_file(const std::string& path);
};

// Exact f(n) for n in [lo, hi] from factorization data; range budget 2^25.
std::vector<double> tabulate(const MultiplicativeFunctionSpec& spec, u64 lo,
                             u64 hi);

// sum over primes p <= X of (1 - f(p)) / p.
double pretentious_distance(const MultiplicativeFunctionSpec& spec, u64 X);

struct WirsingReport {
    u64 N = 0;
    u64 cutoff = 0;
    double partial_product = 0.0;  // prod_{p<=cutoff} (1-1/p)(1+f(p)/p+f(p^2)/p^2+...)
    double empirical_mean = 0.0;   // (1/N) sum_{n<=N} f(n)
    double alpha = 0.0;            // (1/N) sum |f(n)|
    double beta = 0.0;             // same as empirical_mean, reported per the
                                   // alpha/beta convention
    double distance = 0.0;         // pretentious distance at X = cutoff
};

WirsingReport wirsing_mean(const MultiplicativeFunctionSpec& spec, u64 N,
                           u64 prime_cutoff, unsigned threads = 0);

struct ShortLongReport {
    u64 X = 0, h = 0, step = 1;
    double eps = 0.0;
    u64 count = 0;
    double long_average = 0.0;  // (1/X) sum_{X<=n<=2X} f(n)
    double dev_min = 0.0, dev_p25 = 0.0, dev_p50 = 0.0, dev_p75 = 0.0,
           dev_p90 = 0.0, dev_p99 = 0.0, dev_max = 0.0;
    u64 exceptional_count = 0;     // x with |S_f(x,h) - h*long_average| > eps*h
    double exceptional_fraction = 0.0;
};

ShortLongReport short_vs_long(const MultiplicativeFunctionSpec& spec, u64 X,
                              u64 h, u64 step, double eps, unsigned threads = 0);

struct SignChangeReport {
    u64 N = 0;
    u64 count = 0;         // adjacent nonzero pairs with product < 0
    double proportion = 0.0;  // count / N
    u64 nonzero_count = 0;
    bool all_zero = false;  // reported, not an error
};

SignChangeReport sign_changes(const MultiplicativeFunctionSpec& spec, u64 N,
                              unsigned threads = 0);

struct SmoothWitness {
    bool found = false;
    u64 witness = 0;  // first n in [N, N + C*sqrt(N)] with lpf(n) <= N^eps
    u64 offset = 0;   // witness - N
    double bound = 0.0;  // N^eps
    u64 scan_hi = 0;
};

SmoothWitness smooth_in_interval(u64 N, double eps_exponent, double C);

} // namespace liouville::multfunc
