// Pattern censuses, autocorrelations (exact integers), averaged / logarithmic
// Chowla statistics, and the progression discrepancy scanner, all checked
// against brute-force oracles at small scale.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "liouville/chowla.hpp"
#include "liouville/rng.hpp"
#include "liouville/sieve.hpp"

using namespace liouville;
using namespace liouville::chowla;

TEST_CASE("census N=10 k=1 splits five/five") {
    PatternCensus pc = pattern_census(10, 1);
    REQUIRE(pc.counts.size() == 2);
    CHECK(pc.counts[0] == 5);  // +1s
    CHECK(pc.counts[1] == 5);  // -1s
    CHECK(pc.frequencies[0] == 0.5);
    CHECK(pc.frequencies[1] == 0.5);
}

TEST_CASE("census equals brute force at N=1e4, k=3") {
    const u64 N = 10000;
    const int k = 3;
    PatternCensus pc = pattern_census(N, k);
    FactorTable t = sieve_segment(1, N);
    std::vector<u64> brute(std::size_t(1) << k, 0);
    for (u64 n = 1; n + k - 1 <= N; ++n) {
        unsigned code = 0;
        for (int j = 0; j < k; ++j)
            if (t.lambda(n + j) == -1) code |= 1u << j;
        ++brute[code];
    }
    CHECK(pc.counts == brute);
    u64 windows = 0;
    for (u64 c : pc.counts) windows += c;
    CHECK(windows == N - k + 1);
    for (std::size_t c = 0; c < brute.size(); ++c)
        CHECK(pc.frequencies[c] == double(brute[c]) / double(N));
}

TEST_CASE("census k=1 counts are (N +- L(N))/2") {
    for (u64 N : {100, 999, 4096}) {
        PatternCensus pc = pattern_census(N, 1);
        i64 L = mertens_lambda(N);
        CHECK(i64(pc.counts[0]) == (i64(N) + L) / 2);
        CHECK(i64(pc.counts[1]) == (i64(N) - L) / 2);
    }
}

TEST_CASE("census inclusion-exclusion matches pair correlation near boundary") {
    const u64 N = 5000;
    PatternCensus pc = pattern_census(N, 2);
    // windows n in [1, N-1]: sum of lambda(n)lambda(n+1) over that range
    i64 census_sum = i64(pc.counts[0]) - i64(pc.counts[1]) - i64(pc.counts[2]) +
                     i64(pc.counts[3]);
    CorrelationResult r = correlation(N, {0, 1});
    CHECK(std::abs(r.sum - census_sum) <= 2);  // boundary terms only
}

TEST_CASE("correlation hand value and conventions") {
    CorrelationResult r = correlation(8, {0, 1});
    CHECK(r.sum == -4);
    CHECK(r.normalized == -0.5);

    // one shift means a single lambda factor: the plain partial sum
    CHECK(correlation(100, {0}).sum == mertens_lambda(100));
    CHECK(correlation(100, {5}).sum == mertens_lambda(105) - mertens_lambda(5));
}

TEST_CASE("triple correlation equals brute force") {
    const u64 N = 2000;
    std::vector<u64> shifts = {0, 1, 3};
    CorrelationResult r = correlation(N, shifts);
    FactorTable t = sieve_segment(1, N + 3);
    i64 brute = 0;
    for (u64 n = 1; n <= N; ++n)
        brute += i64(t.lambda(n)) * t.lambda(n + 1) * t.lambda(n + 3);
    CHECK(r.sum == brute);
}

TEST_CASE("correlation preconditions") {
    CHECK_THROWS_AS(correlation(10, {}), std::invalid_argument);
    CHECK_THROWS_AS(correlation(10, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(correlation(10, {11}), std::invalid_argument);
}

TEST_CASE("averaged k=1 collapses to a partial-sum difference") {
    const u64 x = 10000;
    double v = averaged_chowla(x, 1, 1);
    double expect =
        std::abs(double(mertens_lambda(x + 1) - 1)) / double(x);  // L(1) = 1
    CHECK(v == expect);
}

TEST_CASE("averaged k=2 equals the brute double loop exactly") {
    const u64 x = 10000, h = 3;
    double v = averaged_chowla(x, h, 2);
    FactorTable t = sieve_segment(1, x + h);
    u64 total = 0;
    for (u64 h1 = 1; h1 <= h; ++h1)
        for (u64 h2 = 1; h2 <= h; ++h2) {
            i64 s = 0;
            for (u64 n = 1; n <= x; ++n)
                s += i64(t.lambda(n + h1)) * t.lambda(n + h2);
            total += u64(s < 0 ? -s : s);
        }
    CHECK(v == double(total) / (double(h * h) * double(x)));
}

TEST_CASE("averaged preconditions") {
    CHECK_THROWS_AS(averaged_chowla(100, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(averaged_chowla(100, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(averaged_chowla(100, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(averaged_chowla(100, 1 << 10, 3), std::invalid_argument);
}

TEST_CASE("log-weighted correlation small cases") {
    double v2 = log_chowla(2, 1);
    CHECK(v2 == doctest::Approx((-1.0 + 0.5) / std::log(2.0)).epsilon(1e-12));

    FactorTable t = sieve_segment(1, 9);
    double direct = 0.0;
    for (u64 n = 1; n <= 8; ++n)
        direct += double(t.lambda(n) * t.lambda(n + 1)) / double(n);
    CHECK(log_chowla(8, 1) ==
          doctest::Approx(direct / std::log(8.0)).epsilon(1e-12));
}

TEST_CASE("discrepancy of lambda at N=10") {
    DiscrepancyResult r = discrepancy_scan_lambda(10);
    CHECK(r.max_abs == 2);
    CHECK(r.argmax_d == 1);
    CHECK(r.argmax_n == 8);
}

TEST_CASE("discrepancy of all ones") {
    std::vector<i8> ones(100, 1);
    DiscrepancyResult r = discrepancy_scan(ones, 100);
    CHECK(r.max_abs == 100);
    CHECK(r.argmax_d == 1);
    CHECK(r.argmax_n == 100);
}

TEST_CASE("discrepancy equals brute force with tie-breaks") {
    for (u64 seed = 0; seed < 5; ++seed) {
        const u64 N = 500;
        CounterRng rng(seed);
        std::vector<i8> vals(N);
        for (u64 i = 0; i < N; ++i) vals[i] = i8(rng.sign(1, i));
        DiscrepancyResult r = discrepancy_scan(vals, N);

        u64 best = 0, bd = 0, bn = 0;
        for (u64 d = 1; d <= N; ++d) {
            i64 s = 0;
            for (u64 j = 1; j * d <= N; ++j) {
                s += vals[j * d - 1];
                u64 a = u64(s < 0 ? -s : s);
                if (a > best) {
                    best = a;
                    bd = d;
                    bn = j;
                }
            }
        }
        CHECK(r.max_abs == best);
        CHECK(r.argmax_d == bd);
        CHECK(r.argmax_n == bn);
    }
}

TEST_CASE("discrepancy rejects zeros and bad sizes") {
    std::vector<i8> withzero = {1, -1, 0, 1};
    CHECK_THROWS_AS(discrepancy_scan(withzero, 4), std::invalid_argument);
    std::vector<i8> short_vals = {1, -1};
    CHECK_THROWS_AS(discrepancy_scan(short_vals, 4), std::invalid_argument);
}

TEST_CASE("census preconditions") {
    CHECK_THROWS_AS(pattern_census(10, 0), std::invalid_argument);
    CHECK_THROWS_AS(pattern_census(10, 7), std::invalid_argument);
    CHECK_THROWS_AS(pattern_census(2, 3), std::invalid_argument);
}
