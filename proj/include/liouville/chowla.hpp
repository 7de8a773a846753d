// Sign-pattern censuses, shifted autocorrelations of lambda, averaged and
// logarithmic Chowla statistics, and a discrepancy scanner over homogeneous
// progressions.
#pragma once

#include <vector>

#include "liouville/common.hpp"

namespace liouville::chowla {

struct PatternCensus {
    u64 N = 0;
    int k = 0;
    // counts[code] over n in [1, N-k+1]; bit j of code is set iff
    // lambda(n+j) == -1.
    std::vector<u64> counts;
    std::vector<double> frequencies;  // counts / N
};

struct CorrelationResult {
    u64 N = 0;
    std::vector<u64> shifts;
    i64 sum = 0;
    double normalized = 0.0;  // sum / N
};

struct DiscrepancyResult {
    u64 N = 0;
    u64 max_abs = 0;
    u64 argmax_d = 0;
    u64 argmax_n = 0;  // max over d>=1, n with d*n <= N of |sum_{j<=n} f(jd)|
};

// Counts of n in [1, N-k+1] whose window (lambda(n),...,lambda(n+k-1)) matches
// each of the 2^k sign patterns; one streaming pass.
PatternCensus pattern_census(u64 N, int k, unsigned threads = 0);

// Exact integer sum over n <= N of prod_j lambda(n + shifts[j]).
// Shifts must be distinct, >= 0, max <= N.
CorrelationResult correlation(u64 N, const std::vector<u64>& shifts,
                              unsigned threads = 0);

// (1 / (h^k x)) * sum over all k-tuples (h_1..h_k) in [1,h]^k of
// |sum_{n<=x} lambda(n+h_1)...lambda(n+h_k)|. Repeated tuples are kept;
// lambda^2 = 1 reduces them to the odd-multiplicity shift set.
double averaged_chowla(u64 x, u64 h, int k, unsigned threads = 0);

// (sum_{n<=x} lambda(n) lambda(n+shift) / n) / log x.
double log_chowla(u64 x, u64 shift, unsigned threads = 0);

// Values must be +-1 on [1, N] (vals[n-1] = f(n)); zeros are rejected.
DiscrepancyResult discrepancy_scan(const std::vector<i8>& vals, u64 N,
                                   unsigned threads = 0);

// Convenience: discrepancy of lambda itself on [1, N].
DiscrepancyResult discrepancy_scan_lambda(u64 N, unsigned threads = 0);

} // namespace liouville::chowla
