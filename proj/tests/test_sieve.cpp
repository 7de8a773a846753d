// Factor-table correctness: hand values on [1,10], trial-division oracles on
// high segments, split independence, streaming aggregates, and the disk cache.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "liouville/sieve.hpp"

using namespace liouville;

namespace {

// independent trial-division factor count (multiplicity), squarefree, lpf
struct Ref {
    u32 omega = 0;
    bool squarefree = true;
    u64 lpf = 1;
};

Ref ref_factor(u64 n) {
    Ref r;
    for (u64 p = 2; p * p <= n; ++p) {
        u32 e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) {
            r.omega += e;
            r.lpf = p;
            if (e > 1) r.squarefree = false;
        }
    }
    if (n > 1) {
        r.omega += 1;
        r.lpf = n;
    }
    return r;
}

} // namespace

TEST_CASE("hand values on [1,10]") {
    FactorTable t = sieve_segment(1, 10);
    const int lam[] = {0, 1, -1, -1, 1, -1, 1, -1, -1, 1, 1};
    const int mu[] = {0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    const u32 om[] = {0, 0, 1, 1, 2, 1, 2, 1, 3, 2, 2};
    for (u64 n = 1; n <= 10; ++n) {
        CHECK(t.lambda(n) == lam[n]);
        CHECK(t.mu(n) == mu[n]);
        CHECK(t.omega(n) == om[n]);
    }
    CHECK(t.lambda(1) == 1);
    CHECK(t.mu(1) == 1);
    CHECK(t.omega(1) == 0);
    CHECK(t.mangoldt(1) == 0.0);
    CHECK(t.is_squarefree(1));
    CHECK_FALSE(t.is_prime(1));
    CHECK_FALSE(t.is_prime_power(1));
    CHECK(t.is_prime(7));
    CHECK(t.is_prime_power(7));
    CHECK(t.is_prime_power(8));
    CHECK_FALSE(t.is_prime(8));
    CHECK(t.mangoldt(8) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(t.mangoldt(7) == doctest::Approx(std::log(7.0)).epsilon(1e-15));
    CHECK(t.mangoldt(6) == 0.0);
    CHECK(t.mangoldt(10) == 0.0);
}

TEST_CASE("lpf column") {
    SieveOptions opt;
    opt.with_lpf = true;
    FactorTable t = sieve_segment(1, 1 << 12, opt);
    CHECK(t.lpf(1) == 1);
    CHECK(t.lpf(2) == 2);
    CHECK(t.lpf(1024) == 2);
    CHECK(t.lpf(2310) == 11);
    CHECK(t.lpf(4093) == 4093);  // prime
    for (u64 n = 2; n <= 4096; n += 97) CHECK(t.lpf(n) == ref_factor(n).lpf);
}

TEST_CASE("psi(10) equals log lcm(1..10)") {
    FactorTable t = sieve_segment(1, 10);
    double psi = 0.0;
    for (u64 n = 1; n <= 10; ++n) psi += t.mangoldt(n);
    CHECK(psi == doctest::Approx(std::log(2520.0)).epsilon(1e-12));
}

TEST_CASE("high segment vs trial division") {
    u64 lo = 999999990, hi = 1000000000;
    SieveOptions opt;
    opt.with_lpf = true;
    FactorTable t = sieve_segment(lo, hi, opt);
    for (u64 n = lo; n <= hi; ++n) {
        Ref r = ref_factor(n);
        CHECK(t.omega(n) == r.omega);
        CHECK(t.is_squarefree(n) == r.squarefree);
        CHECK(t.lpf(n) == r.lpf);
        CHECK(t.lambda(n) == ((r.omega & 1) ? -1 : 1));
    }
}

TEST_CASE("segment split independence") {
    FactorTable whole = sieve_segment(1000, 5000);
    FactorTable a = sieve_segment(1000, 2999);
    FactorTable b = sieve_segment(3000, 5000);
    for (u64 n = 1000; n <= 5000; ++n) {
        const FactorTable& part = n < 3000 ? a : b;
        CHECK(whole.omega(n) == part.omega(n));
        CHECK(whole.lambda(n) == part.lambda(n));
        CHECK(whole.mu(n) == part.mu(n));
    }
}

TEST_CASE("range checks throw") {
    FactorTable t = sieve_segment(10, 20);
    CHECK_THROWS_AS(t.lambda(9), std::invalid_argument);
    CHECK_THROWS_AS(t.lambda(21), std::invalid_argument);
    CHECK_THROWS_AS(sieve_segment(5, 4), std::invalid_argument);
    CHECK_THROWS_AS(sieve_segment(0, 4), std::invalid_argument);
    FactorTable nolpf = sieve_segment(10, 20);
    CHECK_THROWS_AS(nolpf.lpf(10), std::invalid_argument);
}

TEST_CASE("lambda partial sums") {
    CHECK(mertens_lambda(1) == 1);
    CHECK(mertens_lambda(10) == 0);
    CHECK(mertens_lambda(20) == -4);  // hand sum over [11,20]
    CHECK(mertens_lambda(1000000) == -530);
    CHECK(mertens_lambda(1000000, 4) == -530);  // thread count is cosmetic
}

TEST_CASE("squarefree count at 1e6") {
    u64 q = 0;
    for (u64 lo = 1; lo <= 1000000; lo += 1 << 20) {
        u64 hi = std::min<u64>(1000000, lo + (1 << 20) - 1);
        FactorTable t = sieve_segment(lo, hi);
        for (u64 n = lo; n <= hi; ++n) q += t.is_squarefree(n);
    }
    CHECK(q == 607926);  // exact Q(1e6); 6/pi^2 * 1e6 = 607927.1...
}

TEST_CASE("prime list vs oracle") {
    PrimeList pl = primes_in(1, 100);
    std::vector<u64> expect = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                               43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    CHECK(pl.primes == expect);
    PrimeList hi = primes_in(999999930, 1000000010);
    std::vector<u64> hi_expect;
    for (u64 n = 999999930; n <= 1000000010; ++n) {
        Ref r = ref_factor(n);
        if (r.omega == 1) hi_expect.push_back(n);
    }
    CHECK(hi.primes == hi_expect);
    CHECK(primes_in(24, 28).primes.empty());
}

TEST_CASE("table cache round trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "liouville-cache-test";
    fs::create_directories(dir);
    std::string path = (dir / "seg.bin").string();

    FactorTable t = sieve_segment(500, 1500);
    write_table_cache(t, path);
    FactorTable back = read_table_cache(path);
    for (u64 n = 500; n <= 1500; ++n) {
        CHECK(back.omega(n) == t.omega(n));
        CHECK(back.mu(n) == t.mu(n));
        CHECK(back.is_prime(n) == t.is_prime(n));
    }
    fs::remove_all(dir);
}
