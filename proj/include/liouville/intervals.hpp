// Short-interval sums of lambda / Lambda, variance scans over [X, 2X), and the
// O(1)-per-step sliding window that feeds them.
#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "liouville/common.hpp"
#include "liouville/sieve.hpp"

namespace liouville::intervals {

enum class Weight { lambda, mangoldt };

Weight parse_weight(const std::string& s);
const char* weight_name(Weight w);

// Histogram of S/sqrt(h): 48 interior bins of width 0.25 on [-6, 6) plus an
// underflow bin (index 0) and an overflow bin (index 49).
constexpr int kHistBins = 50;
constexpr double kHistLo = -6.0;
constexpr double kHistBinWidth = 0.25;

int hist_bin(double v);

struct IntervalSumStats {
    u64 x_start = 0;
    u64 h = 0;
    u64 step = 1;
    Weight weight = Weight::lambda;
    u64 count = 0;           // number of sampled x
    double mean_sq = 0.0;    // average of S(x,h)^2 (centered S-h for mangoldt)
    double normalized_variance = 0.0;  // mean_sq / h^2
    double max_abs = 0.0;
    // (threshold, count of sampled x with |S| > threshold*h), input order
    std::vector<std::pair<double, u64>> exceptional_counts;
    std::array<u64, kHistBins> histogram{};
};

// Exact S(x,h) = sum_{x < n <= x+h} w(n). Requires [x+1, x+h] inside table.
double interval_sum(const FactorTable& table, u64 x, u64 h, Weight w);

// Scan x in [X, 2X) at the given stride; the unit-stride sum over integer x
// equals the integral over real x because S(x,h) only jumps at integers.
IntervalSumStats variance_scan(u64 X, u64 h, u64 step, Weight w,
                               const std::vector<double>& thresholds,
                               unsigned threads = 0);

// Streaming sliding window: emits (x, S(x,h)) for every x in [X, 2X), step 1,
// maintaining S(x+1,h) = S(x,h) - w(x+1) + w(x+h+1) exactly.
void moving_sum_scan(u64 X, u64 h, Weight w,
                     const std::function<void(u64, double)>& emit);

} // namespace liouville::intervals
