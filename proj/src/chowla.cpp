#include "liouville/chowla.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "liouville/kernels.hpp"
#include "liouville/parallel.hpp"
#include "liouville/sieve.hpp"

namespace liouville::chowla {

namespace {

constexpr u64 kChunk = u64(1) << 22;

// parity[i] = 1 iff lambda(lo + i) = -1, as 0/1 bytes for the xor kernels.
std::vector<u8> parity_bytes(u64 lo, u64 hi, unsigned threads) {
    std::vector<u8> out(hi - lo + 1);
    run_range_chunks(lo, hi, kChunk, threads, [&](u64, u64 clo, u64 chi) {
        FactorTable t = sieve_segment(clo, chi, {});
        const u8* om = t.omega_data();
        u8* dst = out.data() + (clo - lo);
        for (u64 i = 0; i <= chi - clo; ++i) dst[i] = om[i] & 1;
    });
    return out;
}

// sum over n in [1,x] of prod over s in `shifts` of lambda(n+s) for a set of
// distinct shifts (possibly empty), with p = parity array based at n=1
// (lambda(n+s) lives at p[(n-1)+s]).
i64 signed_correlation_int(const u8* p, u64 x, const u64* shifts, int k,
                           unsigned threads) {
    if (k == 0) return static_cast<i64>(x);
    u64 odd = 0;
    unsigned nt = resolve_threads(threads);
    std::vector<u64> parts(ceil_div(x, kChunk), 0);
    run_chunks(parts.size(), nt, [&](u64 c) {
        u64 lo = c * kChunk, len = std::min(x - lo, kChunk);
        const auto& ops = kernels::ops();
        switch (k) {
            case 1:
                parts[c] = ops.count_odd(p + shifts[0] + lo, len);
                break;
            case 2:
                parts[c] = ops.sum_xor2(p + shifts[0] + lo, p + shifts[1] + lo, len);
                break;
            case 3:
                parts[c] = ops.sum_xor3(p + shifts[0] + lo, p + shifts[1] + lo,
                                        p + shifts[2] + lo, len);
                break;
            default: {
                u64 cnt = 0;
                for (u64 i = 0; i < len; ++i) {
                    u8 v = 0;
                    for (int j = 0; j < k; ++j) v ^= p[shifts[j] + lo + i];
                    cnt += v & 1;
                }
                parts[c] = cnt;
            }
        }
    });
    for (u64 v : parts) odd += v;
    // sum = (+1 terms) - (-1 terms) = x - 2*odd
    return static_cast<i64>(x) - 2 * static_cast<i64>(odd);
}

u64 abs_correlation_int(const u8* p, u64 x, const u64* shifts, int k,
                        unsigned threads) {
    i64 s = signed_correlation_int(p, x, shifts, k, threads);
    return static_cast<u64>(s < 0 ? -s : s);
}

} // namespace

PatternCensus pattern_census(u64 N, int k, unsigned threads) {
    if (k < 1 || k > 6) fail_arg("pattern length k must be in [1, 6]");
    if (N < static_cast<u64>(k)) fail_arg("pattern_census requires N >= k");

    PatternCensus out;
    out.N = N;
    out.k = k;
    const u64 npat = u64(1) << k;
    std::vector<u8> p = parity_bytes(1, N, threads);

    const u64 nsamples = N - static_cast<u64>(k) + 1;  // windows start at n=1
    unsigned nt = resolve_threads(threads);
    u64 nchunks = ceil_div(nsamples, kChunk);
    std::vector<std::vector<u64>> parts(nchunks);
    run_chunks(nchunks, nt, [&](u64 c) {
        u64 lo = c * kChunk, hi = std::min(nsamples, lo + kChunk);
        std::vector<u64>& cnt = parts[c];
        cnt.assign(npat, 0);
        u64 code = 0;
        for (int j = 0; j < k; ++j) code |= u64(p[lo + j]) << j;
        ++cnt[code];
        for (u64 i = lo + 1; i < hi; ++i) {
            code = (code >> 1) | (u64(p[i + k - 1]) << (k - 1));
            ++cnt[code];
        }
    });

    out.counts.assign(npat, 0);
    for (const auto& cnt : parts)
        for (u64 c = 0; c < npat; ++c) out.counts[c] += cnt[c];
    out.frequencies.resize(npat);
    for (u64 c = 0; c < npat; ++c)
        out.frequencies[c] =
            static_cast<double>(out.counts[c]) / static_cast<double>(N);
    return out;
}

CorrelationResult correlation(u64 N, const std::vector<u64>& shifts,
                              unsigned threads) {
    if (N < 1) fail_arg("correlation requires N >= 1");
    if (shifts.empty()) fail_arg("correlation requires at least one shift");
    std::vector<u64> s = shifts;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        fail_arg("correlation shifts must be distinct");
    if (s.back() > N) fail_arg("correlation max shift must be <= N");

    std::vector<u8> p = parity_bytes(1, N + s.back(), threads);
    CorrelationResult out;
    out.N = N;
    out.shifts = shifts;
    out.sum = signed_correlation_int(p.data(), N, s.data(), int(s.size()), threads);
    out.normalized = static_cast<double>(out.sum) / static_cast<double>(N);
    return out;
}

double averaged_chowla(u64 x, u64 h, int k, unsigned threads) {
    if (k < 1 || k > 3) fail_arg("averaged_chowla requires k in {1,2,3}");
    if (h < 1 || x < h) fail_arg("averaged_chowla requires x >= h >= 1");
    u64 tuples = 1;
    for (int i = 0; i < k; ++i) {
        tuples *= h;
        if (tuples > (u64(1) << 18)) fail_arg("averaged_chowla shift budget exceeded");
    }

    std::vector<u8> p = parity_bytes(1, x + h, threads);

    // Enumerate all h^k ordered tuples; lambda^2 = 1 cancels even-multiplicity
    // shifts, so each tuple reduces to its odd-multiplicity shift set, cached.
    std::unordered_map<u64, u64> cache;
    cache.reserve(1024);
    std::vector<u64> tup(k, 1);
    u64 total = 0;
    for (;;) {
        u64 odd_set[3];
        int m = 0;
        for (int i = 0; i < k; ++i) {
            int mult = 0;
            bool seen = false;
            for (int j = 0; j < k; ++j) {
                if (tup[j] == tup[i]) {
                    ++mult;
                    if (j < i) seen = true;
                }
            }
            if (!seen && (mult & 1)) odd_set[m++] = tup[i];
        }
        std::sort(odd_set, odd_set + m);
        u64 key = 0;
        for (int i = 0; i < m; ++i) key |= (odd_set[i] + 1) << (20 * i);
        auto it = cache.find(key);
        u64 a;
        if (it != cache.end()) {
            a = it->second;
        } else {
            a = abs_correlation_int(p.data(), x, odd_set, m, threads);
            cache.emplace(key, a);
        }
        total += a;

        int pos = k - 1;
        while (pos >= 0 && tup[pos] == h) tup[pos--] = 1;
        if (pos < 0) break;
        ++tup[pos];
    }
    return static_cast<double>(total) /
           (static_cast<double>(tuples) * static_cast<double>(x));
}

double log_chowla(u64 x, u64 shift, unsigned threads) {
    if (x < 2) fail_arg("log_chowla requires x >= 2");
    if (shift < 1) fail_arg("log_chowla requires shift >= 1");

    std::vector<u8> p = parity_bytes(1, x + shift, threads);
    unsigned nt = resolve_threads(threads);
    u64 nchunks = ceil_div(x, kChunk);
    std::vector<double> parts(nchunks, 0.0);
    run_chunks(nchunks, nt, [&](u64 c) {
        u64 lo = c * kChunk, len = std::min(x - lo, kChunk);
        std::vector<u8> buf(len);
        for (u64 i = 0; i < len; ++i)
            buf[i] = p[lo + i] ^ p[lo + shift + i];  // parity of the product
        parts[c] = kernels::ops().signed_harmonic(buf.data(), lo + 1, len);
    });
    double total = 0.0;
    for (double v : parts) total += v;
    return total / std::log(static_cast<double>(x));
}

DiscrepancyResult discrepancy_scan(const std::vector<i8>& vals, u64 N,
                                   unsigned threads) {
    if (N < 1) fail_arg("discrepancy_scan requires N >= 1");
    if (vals.size() < N) fail_arg("discrepancy_scan values shorter than N");
    for (u64 i = 0; i < N; ++i) {
        if (vals[i] == 0) fail_arg("zero value encountered in discrepancy scan");
        if (vals[i] != 1 && vals[i] != -1)
            fail_arg("discrepancy scan values must be +-1");
    }

    struct Best {
        u64 abs = 0, d = 0, n = 0;
    };
    // Small d-blocks so the d-major cost (sum N/d) balances across threads.
    constexpr u64 kDBlock = 256;
    u64 nchunks = ceil_div(N, kDBlock);
    std::vector<Best> parts(nchunks);
    unsigned nt = resolve_threads(threads);
    run_chunks(nchunks, nt, [&](u64 c) {
        u64 dlo = 1 + c * kDBlock, dhi = std::min(N, dlo + kDBlock - 1);
        Best b;
        for (u64 d = dlo; d <= dhi; ++d) {
            i64 s = 0;
            u64 jmax = N / d;
            for (u64 j = 1; j <= jmax; ++j) {
                s += vals[j * d - 1];
                u64 a = static_cast<u64>(s < 0 ? -s : s);
                if (a > b.abs) b = {a, d, j};
            }
        }
        parts[c] = b;
    });

    DiscrepancyResult out;
    out.N = N;
    for (const Best& b : parts) {
        // Strictly-greater merge in ascending chunk order keeps the smallest
        // witnessing d (ties broken by smallest n inside each d loop).
        if (b.abs > out.max_abs) {
            out.max_abs = b.abs;
            out.argmax_d = b.d;
            out.argmax_n = b.n;
        }
    }
    return out;
}

DiscrepancyResult discrepancy_scan_lambda(u64 N, unsigned threads) {
    std::vector<i8> vals(N);
    run_range_chunks(1, N, kChunk, resolve_threads(threads),
                     [&](u64, u64 clo, u64 chi) {
        FactorTable t = sieve_segment(clo, chi, {});
        const u8* om = t.omega_data();
        for (u64 i = 0; i <= chi - clo; ++i)
            vals[clo - 1 + i] = (om[i] & 1) ? i8(-1) : i8(1);
    });
    return discrepancy_scan(vals, N, threads);
}

} // namespace liouville::chowla
