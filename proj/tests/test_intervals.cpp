// Short-interval statistics: exact window sums, scan-vs-direct equivalence,
// stride semantics, exceptional counts, and histogram bookkeeping.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "liouville/intervals.hpp"
#include "liouville/rng.hpp"
#include "liouville/sieve.hpp"

using namespace liouville;
using namespace liouville::intervals;

TEST_CASE("interval_sum hand values") {
    FactorTable t = sieve_segment(1, 200);
    CHECK(interval_sum(t, 0, 10, Weight::lambda) == 0.0);   // L(10)
    CHECK(interval_sum(t, 100, 10, Weight::lambda) == -6.0);  // hand count
    CHECK(interval_sum(t, 0, 10, Weight::mangoldt) ==
          doctest::Approx(std::log(2520.0)).epsilon(1e-12));  // psi(10)
    CHECK_THROWS_AS(interval_sum(t, 191, 10, Weight::lambda),
                    std::invalid_argument);
    CHECK_THROWS_AS(interval_sum(t, 10, 0, Weight::lambda), std::invalid_argument);
}

TEST_CASE("h=1 scan is exactly unit mass") {
    auto st = variance_scan(100, 1, 1, Weight::lambda, {0.5});
    CHECK(st.count == 100);
    CHECK(st.mean_sq == 1.0);
    CHECK(st.normalized_variance == 1.0);
    CHECK(st.max_abs == 1.0);
    REQUIRE(st.exceptional_counts.size() == 1);
    CHECK(st.exceptional_counts[0].second == 100);  // |S| = 1 > 0.5 everywhere
    u64 mass = 0;
    for (u64 b : st.histogram) mass += b;
    CHECK(mass == st.count);
    CHECK(st.histogram[21] + st.histogram[29] == 100);  // S/sqrt(1) = -1 or +1
}

TEST_CASE("scan matches direct window sums exactly (lambda)") {
    const u64 X = 5000, h = 37;
    auto st = variance_scan(X, h, 1, Weight::lambda, {0.1, 0.3});

    std::map<u64, double> sums;
    moving_sum_scan(X, h, Weight::lambda,
                    [&](u64 x, double s) { sums[x] = s; });
    REQUIRE(sums.size() == X);

    double sum_sq = 0.0, max_abs = 0.0;
    u64 exc1 = 0, exc2 = 0;
    i64 cut1 = static_cast<i64>(std::floor(0.1 * h));
    i64 cut2 = static_cast<i64>(std::floor(0.3 * h));
    for (auto& [x, s] : sums) {
        sum_sq += s * s;
        max_abs = std::max(max_abs, std::abs(s));
        if (std::abs(s) > cut1) ++exc1;
        if (std::abs(s) > cut2) ++exc2;
    }
    CHECK(st.mean_sq == sum_sq / double(X));  // both sides integer-exact
    CHECK(st.max_abs == max_abs);
    CHECK(st.exceptional_counts[0].second == exc1);
    CHECK(st.exceptional_counts[1].second == exc2);

    // spot-check the stream against interval_sum on a fresh table
    FactorTable t = sieve_segment(X, 2 * X + h);
    CounterRng rng(1);
    for (int i = 0; i < 200; ++i) {
        u64 x = rng.uniform_u64(1, i, X, 2 * X - 1);
        CHECK(sums[x] == interval_sum(t, x, h, Weight::lambda));
    }
}

TEST_CASE("adjacent window sums move by -2, 0, or +2") {
    const u64 X = 2000, h = 25;
    double prev = 0.0;
    bool first = true;
    moving_sum_scan(X, h, Weight::lambda, [&](u64, double s) {
        if (!first) {
            double d = s - prev;
            CHECK((d == -2.0 || d == 0.0 || d == 2.0));
        }
        prev = s;
        first = false;
    });
}

TEST_CASE("stride-2 scan equals step-1 scan restricted to even offsets") {
    const u64 X = 3000, h = 16;
    auto st2 = variance_scan(X, h, 2, Weight::lambda, {0.2});
    CHECK(st2.count == (X + 1) / 2);

    std::vector<double> sums;
    moving_sum_scan(X, h, Weight::lambda,
                    [&](u64, double s) { sums.push_back(s); });
    double sum_sq = 0.0;
    u64 exc = 0, mass = 0;
    i64 cut = static_cast<i64>(std::floor(0.2 * h));
    for (u64 j = 0; j < X; j += 2) {
        sum_sq += sums[j] * sums[j];
        if (std::abs(sums[j]) > cut) ++exc;
    }
    CHECK(st2.mean_sq == sum_sq / double(st2.count));
    CHECK(st2.exceptional_counts[0].second == exc);
    for (u64 b : st2.histogram) mass += b;
    CHECK(mass == st2.count);
}

TEST_CASE("mangoldt windows are centered at h") {
    const u64 X = 2000, h = 50;
    auto st = variance_scan(X, h, 1, Weight::mangoldt, {0.5});

    double sum_sq = 0.0, max_abs = 0.0;
    u64 exc = 0;
    moving_sum_scan(X, h, Weight::mangoldt, [&](u64, double s) {
        double d = s - double(h);
        sum_sq += d * d;
        max_abs = std::max(max_abs, std::abs(d));
        if (std::abs(d) > 0.5 * h) ++exc;
    });
    CHECK(st.mean_sq == doctest::Approx(sum_sq / double(X)).epsilon(1e-9));
    CHECK(st.max_abs == doctest::Approx(max_abs).epsilon(1e-9));
    CHECK(st.exceptional_counts[0].second == exc);
    u64 mass = 0;
    for (u64 b : st.histogram) mass += b;
    CHECK(mass == st.count);
}

TEST_CASE("thread count does not change results") {
    const u64 X = 60000, h = 64;  // spans multiple scan chunks only at 1 core;
                                  // equality must hold regardless
    auto a = variance_scan(X, h, 1, Weight::lambda, {0.1}, 1);
    auto b = variance_scan(X, h, 1, Weight::lambda, {0.1}, 4);
    CHECK(a.mean_sq == b.mean_sq);
    CHECK(a.max_abs == b.max_abs);
    CHECK(a.exceptional_counts[0].second == b.exceptional_counts[0].second);
    CHECK(a.histogram == b.histogram);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(variance_scan(100, 0, 1, Weight::lambda, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(variance_scan(100, 100, 1, Weight::lambda, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(variance_scan(100, 10, 0, Weight::lambda, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_weight("liouville"), std::invalid_argument);
    CHECK(parse_weight("lambda") == Weight::lambda);
    CHECK(parse_weight("mangoldt") == Weight::mangoldt);
}

TEST_CASE("histogram binning edges") {
    CHECK(hist_bin(-7.0) == 0);
    CHECK(hist_bin(-6.0) == 1);
    CHECK(hist_bin(-5.99) == 1);
    CHECK(hist_bin(0.0) == 25);
    CHECK(hist_bin(5.99) == 48);
    CHECK(hist_bin(6.0) == 49);
    CHECK(hist_bin(100.0) == 49);
}
