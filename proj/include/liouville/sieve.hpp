#pragma once
// Segmented factor sieve over [lo, hi]: exact Omega, lambda, mu, prime and
// prime-power flags, optional largest-prime-factor array. One algorithm, no
// probabilistic shortcuts: per segment we keep a residue array and divide out
// every base prime p <= sqrt(hi); whatever survives (> 1) is a single prime
// factor above sqrt(hi).

#include <functional>
#include <string>
#include <vector>

#include "liouville/common.hpp"

namespace liouville {

struct SieveOptions {
    bool with_lpf = false;          // keep largest prime factor per entry
    u64 segment_budget = u64(1) << 26;  // max entries per sieve_segment call
};

struct PrimeList {
    u64 lo = 0, hi = 0;
    std::vector<u64> primes;
};

class FactorTable {
public:
    // flag bits per entry
    static constexpr u8 kSquarefree = 1;
    static constexpr u8 kPrimePower = 2;
    static constexpr u8 kPrime = 4;

    FactorTable() = default;
    FactorTable(u64 lo, u64 hi, std::vector<u8> omega, std::vector<u8> flags,
                std::vector<u64> lpf = {});

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }
    u64 size() const { return omega_.size(); }
    bool has_lpf() const { return !lpf_.empty(); }

    u8 omega(u64 n) const { return omega_[index(n)]; }
    int lambda(u64 n) const { return (omega_[index(n)] & 1) ? -1 : 1; }
    int mu(u64 n) const {
        u64 i = index(n);
        if (!(flags_[i] & kSquarefree)) return 0;
        return (omega_[i] & 1) ? -1 : 1;
    }
    bool is_squarefree(u64 n) const { return flags_[index(n)] & kSquarefree; }
    bool is_prime_power(u64 n) const { return flags_[index(n)] & kPrimePower; }
    bool is_prime(u64 n) const { return flags_[index(n)] & kPrime; }
    u64 lpf(u64 n) const;
    // log p when n = p^k, else 0. Recovers p as the exact k-th root; no table
    // columns needed beyond omega and the prime-power flag.
    double mangoldt(u64 n) const;

    const u8* omega_data() const { return omega_.data(); }
    const u8* flags_data() const { return flags_.data(); }
    // Omega parities as a 0/1 byte array (kernel input for correlation scans).
    std::vector<u8> parity_bytes() const;

private:
    u64 index(u64 n) const {
        if (n < lo_ || n > hi_) fail_arg("value outside table range");
        return n - lo_;
    }
    u64 lo_ = 1, hi_ = 0;
    std::vector<u8> omega_, flags_;
    std::vector<u64> lpf_;
};

// Simple sieve of Eratosthenes, primes <= limit.
std::vector<u64> base_primes(u64 limit);

FactorTable sieve_segment(u64 lo, u64 hi, const SieveOptions& opt = {});

// L(x) = sum_{n<=x} lambda(n), streamed over internal chunks.
i64 mertens_lambda(u64 x, unsigned threads = 1);

PrimeList primes_in(u64 lo, u64 hi);

// Streaming factor visitor: calls on_pe(idx, p, e) for every prime power
// p^e || (lo+idx) with p <= sqrt(hi), then on_left(idx, q) for the leftover
// prime q > sqrt(hi) if any. Exactly the sieve's inner walk, exposed so other
// modules (general multiplicative tabulation) reuse it without new algorithms.
void factor_scan(u64 lo, u64 hi,
                 const std::function<void(u64, u64, u32)>& on_pe,
                 const std::function<void(u64, u64)>& on_left);

// Binary cache: per-entry records (omega u8, flags u8), little-endian layout,
// JSON sidecar PATH.json carrying {lo, hi, version}.
void write_table_cache(const FactorTable& t, const std::string& path);
FactorTable read_table_cache(const std::string& path);

} // namespace liouville
