#include "liouville/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "liouville/kernels.hpp"
#include "liouville/parallel.hpp"

#include <nlohmann/json.hpp>

namespace liouville {

// ---- FactorTable -----------------------------------------------------------

FactorTable::FactorTable(u64 lo, u64 hi, std::vector<u8> omega,
                         std::vector<u8> flags, std::vector<u64> lpf)
    : lo_(lo), hi_(hi), omega_(std::move(omega)), flags_(std::move(flags)),
      lpf_(std::move(lpf)) {}

u64 FactorTable::lpf(u64 n) const {
    if (lpf_.empty()) fail_arg("table was sieved without lpf");
    return lpf_[index(n)];
}

double FactorTable::mangoldt(u64 n) const {
    u64 i = index(n);
    if (!(flags_[i] & kPrimePower)) return 0.0;
    if (!lpf_.empty()) return std::log(static_cast<double>(lpf_[i]));
    u32 k = omega_[i];
    if (k == 1) return std::log(static_cast<double>(n));
    // exact integer k-th root: n = p^k by the prime-power flag
    u64 p = static_cast<u64>(std::llround(std::pow(static_cast<double>(n),
                                                   1.0 / static_cast<double>(k))));
    for (u64 cand = p > 2 ? p - 2 : 1;; ++cand) {
        u64 pw = 1;
        bool over = false;
        for (u32 j = 0; j < k; ++j) {
            if (pw > n / cand) { over = true; break; }
            pw *= cand;
        }
        if (!over && pw == n) { p = cand; break; }
        if (over || cand > p + 2) fail_arg("prime-power flag inconsistent");
    }
    return std::log(static_cast<double>(p));
}

std::vector<u8> FactorTable::parity_bytes() const {
    std::vector<u8> out(omega_.size());
    for (std::size_t i = 0; i < omega_.size(); ++i) out[i] = omega_[i] & 1u;
    return out;
}

// ---- base sieve ------------------------------------------------------------

std::vector<u64> base_primes(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<u8> comp(limit + 1, 0);
    for (u64 i = 2; i * i <= limit; ++i)
        if (!comp[i])
            for (u64 j = i * i; j <= limit; j += i) comp[j] = 1;
    for (u64 i = 2; i <= limit; ++i)
        if (!comp[i]) out.push_back(i);
    return out;
}

// ---- segment engine --------------------------------------------------------

namespace {

// Core walk shared by sieve_segment / factor_scan / tabulation. Visits every
// (idx, p, e) with p <= sqrt(hi) and p^e || (lo+idx), then leftovers.
template <class FV, class LV>
void segment_walk(u64 lo, u64 hi, const std::vector<u64>& bps, FV&& on_pe,
                  LV&& on_left) {
    u64 len = hi - lo + 1;
    std::vector<u64> rem(len);
    for (u64 i = 0; i < len; ++i) rem[i] = lo + i;

    for (u64 p : bps) {
        u64 first = lo <= p ? p : (lo + p - 1) / p * p;
        if (first > hi) continue;
        if (p == 2) {
            for (u64 m = first; m <= hi; m += 2) {
                u64 i = m - lo;
                u32 e = static_cast<u32>(__builtin_ctzll(rem[i]));
                rem[i] >>= e;
                on_pe(i, p, e);
                if (hi - m < 2) break;  // guard m += 2 overflow at u64 edge
            }
        } else {
            for (u64 m = first; m <= hi; m += p) {
                u64 i = m - lo;
                u32 e = 0;
                do {
                    rem[i] /= p;
                    ++e;
                } while (rem[i] % p == 0);
                on_pe(i, p, e);
                if (hi - m < p) break;
            }
        }
    }
    for (u64 i = 0; i < len; ++i)
        if (rem[i] > 1) on_left(i, rem[i]);
}

struct BuiltSegment {
    std::vector<u8> omega, flags;
    std::vector<u64> lpf;
};

// MULTI marks ">= 2 distinct primes seen"; borrowed flag bit during the walk,
// rewritten into prime/prime-power bits afterwards.
constexpr u8 kMulti = 0x80;

BuiltSegment build_segment(u64 lo, u64 hi, bool with_lpf) {
    u64 len = hi - lo + 1;
    BuiltSegment seg;
    seg.omega.assign(len, 0);
    seg.flags.assign(len, FactorTable::kSquarefree);
    if (with_lpf) seg.lpf.assign(len, 1);

    auto bps = base_primes(isqrt_u64(hi));
    u8* om = seg.omega.data();
    u8* fl = seg.flags.data();
    u64* lp = with_lpf ? seg.lpf.data() : nullptr;

    segment_walk(
        lo, hi, bps,
        [&](u64 i, u64 p, u32 e) {
            if (om[i] > 0) fl[i] |= kMulti;
            om[i] = static_cast<u8>(om[i] + e);
            if (e >= 2) fl[i] &= static_cast<u8>(~FactorTable::kSquarefree);
            if (lp) lp[i] = p;
        },
        [&](u64 i, u64 q) {
            if (om[i] > 0) fl[i] |= kMulti;
            om[i] = static_cast<u8>(om[i] + 1);
            if (lp) lp[i] = q;
        });

    for (u64 i = 0; i < len; ++i) {
        bool single = !(fl[i] & kMulti) && om[i] > 0;  // n = p^k, n > 1
        fl[i] &= static_cast<u8>(~kMulti);
        if (single) {
            fl[i] |= FactorTable::kPrimePower;
            if (om[i] == 1) fl[i] |= FactorTable::kPrime;
        }
    }
    return seg;
}

constexpr u64 kStreamChunk = u64(1) << 22;  // streaming ops' internal segment

} // namespace

FactorTable sieve_segment(u64 lo, u64 hi, const SieveOptions& opt) {
    if (lo < 1) fail_arg("sieve range must start at 1 or above");
    if (lo > hi) fail_arg("sieve range inverted (lo > hi)");
    if (hi - lo + 1 > opt.segment_budget) fail_arg("segment too large for budget");
    BuiltSegment seg = build_segment(lo, hi, opt.with_lpf);
    return FactorTable(lo, hi, std::move(seg.omega), std::move(seg.flags),
                       std::move(seg.lpf));
}

void factor_scan(u64 lo, u64 hi,
                 const std::function<void(u64, u64, u32)>& on_pe,
                 const std::function<void(u64, u64)>& on_left) {
    if (lo < 1 || lo > hi) fail_arg("factor_scan range invalid");
    segment_walk(lo, hi, base_primes(isqrt_u64(hi)), on_pe, on_left);
}

i64 mertens_lambda(u64 x, unsigned threads) {
    if (x < 1) fail_arg("mertens_lambda requires x >= 1");
    u64 chunks = ceil_div(x, kStreamChunk);
    std::vector<i64> partial(chunks, 0);
    run_chunks(chunks, threads, [&](u64 c) {
        u64 lo = 1 + c * kStreamChunk;
        u64 hi = std::min(x, lo + kStreamChunk - 1);
        BuiltSegment seg = build_segment(lo, hi, false);
        u64 len = hi - lo + 1;
        u64 odd = kernels::ops().count_odd(seg.omega.data(), len);
        partial[c] = static_cast<i64>(len - odd) - static_cast<i64>(odd);
    });
    i64 total = 0;
    for (i64 v : partial) total += v;
    return total;
}

PrimeList primes_in(u64 lo, u64 hi) {
    if (lo > hi) fail_arg("primes_in range inverted");
    PrimeList out;
    out.lo = lo;
    out.hi = hi;
    u64 from = lo < 2 ? 2 : lo;
    if (from > hi) return out;
    u64 len = hi - from + 1;
    std::vector<u8> comp(len, 0);
    for (u64 p : base_primes(isqrt_u64(hi))) {
        u64 start = std::max(p * p, (from + p - 1) / p * p);
        if (start > hi) continue;
        for (u64 m = start; m <= hi; m += p) {
            comp[m - from] = 1;
            if (hi - m < p) break;
        }
    }
    for (u64 i = 0; i < len; ++i)
        if (!comp[i]) out.primes.push_back(from + i);
    return out;
}

// ---- binary cache ----------------------------------------------------------

void write_table_cache(const FactorTable& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open cache file for write: " + path);
    u64 len = t.size();
    std::vector<u8> rec(2 * len);
    for (u64 i = 0; i < len; ++i) {
        rec[2 * i] = t.omega_data()[i];
        rec[2 * i + 1] = t.flags_data()[i];
    }
    f.write(reinterpret_cast<const char*>(rec.data()),
            static_cast<std::streamsize>(rec.size()));
    if (!f) throw std::runtime_error("short write to cache file: " + path);

    nlohmann::ordered_json side;
    side["lo"] = t.lo();
    side["hi"] = t.hi();
    side["version"] = 1;
    side["record"] = "omega:u8,flags:u8";
    std::ofstream sf(path + ".json");
    if (!sf) throw std::runtime_error("cannot open sidecar for write");
    sf << side.dump(2) << "\n";
}

FactorTable read_table_cache(const std::string& path) {
    std::ifstream sf(path + ".json");
    if (!sf) throw std::runtime_error("missing cache sidecar: " + path + ".json");
    nlohmann::json side = nlohmann::json::parse(sf);
    if (side.at("version").get<int>() != 1)
        throw std::runtime_error("unsupported cache version");
    u64 lo = side.at("lo").get<u64>();
    u64 hi = side.at("hi").get<u64>();
    u64 len = hi - lo + 1;

    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("missing cache data file: " + path);
    std::vector<u8> rec(2 * len);
    f.read(reinterpret_cast<char*>(rec.data()),
           static_cast<std::streamsize>(rec.size()));
    if (static_cast<u64>(f.gcount()) != 2 * len)
        throw std::runtime_error("cache data file truncated");
    std::vector<u8> omega(len), flags(len);
    for (u64 i = 0; i < len; ++i) {
        omega[i] = rec[2 * i];
        flags[i] = rec[2 * i + 1];
    }
    return FactorTable(lo, hi, std::move(omega), std::move(flags));
}

} // namespace liouville
