#include "liouville/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "liouville/kernels.hpp"
#include "liouville/parallel.hpp"

namespace liouville::intervals {

Weight parse_weight(const std::string& s) {
    if (s == "lambda") return Weight::lambda;
    if (s == "mangoldt") return Weight::mangoldt;
    fail_arg("unknown weight (expected lambda or mangoldt)");
}

const char* weight_name(Weight w) {
    return w == Weight::lambda ? "lambda" : "mangoldt";
}

int hist_bin(double v) {
    if (v < kHistLo) return 0;
    if (v >= -kHistLo) return kHistBins - 1;
    int b = 1 + static_cast<int>((v - kHistLo) / kHistBinWidth);
    return std::clamp(b, 1, kHistBins - 2);
}

double interval_sum(const FactorTable& table, u64 x, u64 h, Weight w) {
    if (h < 1) fail_arg("interval length h must be >= 1");
    if (x + 1 < table.lo() || x + h > table.hi())
        fail_arg("interval [x+1, x+h] outside table range");
    if (w == Weight::lambda) {
        i64 s = 0;
        for (u64 n = x + 1; n <= x + h; ++n) s += table.lambda(n);
        return static_cast<double>(s);
    }
    double s = 0.0;
    for (u64 n = x + 1; n <= x + h; ++n) s += table.mangoldt(n);
    return s;
}

// ---- value streams ----------------------------------------------------------

namespace {

constexpr u64 kChunk = u64(1) << 22;

// Fills vals[i] = w(first + i) for i in [0, count) by chunked sieving. Chunk
// boundaries are fixed by (first, count) alone, so the fill is deterministic
// under any thread count; each chunk writes a disjoint slice.
void fill_weights(u64 first, u64 count, Weight w, unsigned threads,
                  double* vals) {
    run_range_chunks(first, first + count - 1, kChunk, threads,
                     [&](u64, u64 clo, u64 chi) {
        SieveOptions opt;
        opt.with_lpf = (w == Weight::mangoldt);
        FactorTable t = sieve_segment(clo, chi, opt);
        double* out = vals + (clo - first);
        if (w == Weight::lambda) {
            const u8* om = t.omega_data();
            for (u64 i = 0; i <= chi - clo; ++i)
                out[i] = (om[i] & 1) ? -1.0 : 1.0;
        } else {
            for (u64 n = clo; n <= chi; ++n) out[n - clo] = t.mangoldt(n);
        }
    });
}

void fill_parity(u64 first, u64 count, unsigned threads, i8* vals) {
    run_range_chunks(first, first + count - 1, kChunk, threads,
                     [&](u64, u64 clo, u64 chi) {
        FactorTable t = sieve_segment(clo, chi, {});
        i8* out = vals + (clo - first);
        const u8* om = t.omega_data();
        for (u64 i = 0; i <= chi - clo; ++i)
            out[i] = (om[i] & 1) ? i8(-1) : i8(1);
    });
}

struct ChunkStats {
    double sum_sq = 0.0;
    double max_abs = 0.0;
    std::vector<u64> exc;
    std::array<u64, kHistBins> hist{};
};

} // namespace

IntervalSumStats variance_scan(u64 X, u64 h, u64 step, Weight w,
                               const std::vector<double>& thresholds,
                               unsigned threads) {
    if (h < 1) fail_arg("variance_scan requires h >= 1");
    if (h >= X) fail_arg("variance_scan requires h < X");
    if (step < 1) fail_arg("variance_scan requires step >= 1");

    IntervalSumStats out;
    out.x_start = X;
    out.h = h;
    out.step = step;
    out.weight = w;
    out.count = (X + step - 1) / step;  // x = X + j*step < 2X

    // Values w(n) for n in (X, 2X-1+h]; prefix[i] = sum over X < n <= X+i.
    const u64 nvals = X + h - 1;
    const u64 nwin = X;  // windows at x = X + j, j in [0, X)
    const double inv_sqrt_h = 1.0 / std::sqrt(static_cast<double>(h));
    const double center = (w == Weight::mangoldt) ? static_cast<double>(h) : 0.0;

    unsigned nt = resolve_threads(threads);
    std::vector<ChunkStats> parts;
    u64 nchunks = ceil_div(nwin, kChunk);

    if (w == Weight::lambda) {
        std::vector<i8> vals(nvals);
        fill_parity(X + 1, nvals, nt, vals.data());
        std::vector<i32> prefix(nvals + 1);
        prefix[0] = 0;
        for (u64 i = 0; i < nvals; ++i) prefix[i + 1] = prefix[i] + vals[i];
        std::vector<i8>().swap(vals);

        std::vector<i64> cuts(thresholds.size());
        for (std::size_t k = 0; k < thresholds.size(); ++k)
            cuts[k] = static_cast<i64>(std::floor(thresholds[k] * static_cast<double>(h)));

        if (step == 1) {
            parts.assign(nchunks, ChunkStats{});
            run_chunks(nchunks, nt, [&](u64 c) {
                u64 lo = c * kChunk, hi = std::min(nwin, lo + kChunk);
                ChunkStats& cs = parts[c];
                cs.exc.assign(thresholds.size(), 0);
                kernels::WindowIntOut ko;
                if (thresholds.size() <= kernels::kMaxCuts) {
                    kernels::ops().window_sq_i32(prefix.data() + lo, hi - lo, h,
                                                 cuts.data(), cuts.size(), &ko);
                    for (std::size_t k = 0; k < cuts.size(); ++k)
                        cs.exc[k] = ko.cut_counts[k];
                } else {
                    kernels::ops().window_sq_i32(prefix.data() + lo, hi - lo, h,
                                                 nullptr, 0, &ko);
                    for (u64 i = lo; i < hi; ++i) {
                        i64 d = i64(prefix[i + h]) - i64(prefix[i]);
                        i64 a = d < 0 ? -d : d;
                        for (std::size_t k = 0; k < cuts.size(); ++k)
                            if (a > cuts[k]) ++cs.exc[k];
                    }
                }
                cs.sum_sq = static_cast<double>(ko.sum_sq);
                cs.max_abs = static_cast<double>(ko.max_abs);
                for (u64 i = lo; i < hi; ++i) {
                    i64 d = i64(prefix[i + h]) - i64(prefix[i]);
                    ++cs.hist[hist_bin(static_cast<double>(d) * inv_sqrt_h)];
                }
            });
        } else {
            // Strided scans are cheap; one exact pass.
            parts.assign(1, ChunkStats{});
            ChunkStats& cs = parts[0];
            cs.exc.assign(thresholds.size(), 0);
            u64 ss = 0;
            i64 mx = 0;
            for (u64 j = 0; j < nwin; j += step) {
                i64 d = i64(prefix[j + h]) - i64(prefix[j]);
                i64 a = d < 0 ? -d : d;
                ss += static_cast<u64>(d * d);
                mx = std::max(mx, a);
                for (std::size_t k = 0; k < cuts.size(); ++k)
                    if (a > cuts[k]) ++cs.exc[k];
                ++cs.hist[hist_bin(static_cast<double>(d) * inv_sqrt_h)];
            }
            cs.sum_sq = static_cast<double>(ss);
            cs.max_abs = static_cast<double>(mx);
        }
    } else {
        std::vector<double> vals(nvals);
        fill_weights(X + 1, nvals, w, nt, vals.data());
        std::vector<double> prefix(nvals + 1);
        prefix[0] = 0.0;
        for (u64 i = 0; i < nvals; ++i) prefix[i + 1] = prefix[i] + vals[i];
        std::vector<double>().swap(vals);

        std::vector<double> cuts(thresholds.size());
        for (std::size_t k = 0; k < thresholds.size(); ++k)
            cuts[k] = thresholds[k] * static_cast<double>(h);

        if (step == 1) {
            parts.assign(nchunks, ChunkStats{});
            run_chunks(nchunks, nt, [&](u64 c) {
                u64 lo = c * kChunk, hi = std::min(nwin, lo + kChunk);
                ChunkStats& cs = parts[c];
                cs.exc.assign(thresholds.size(), 0);
                kernels::WindowF64Out ko;
                if (thresholds.size() <= kernels::kMaxCuts) {
                    kernels::ops().window_sq_f64(prefix.data() + lo, hi - lo, h,
                                                 center, cuts.data(), cuts.size(),
                                                 &ko);
                    for (std::size_t k = 0; k < cuts.size(); ++k)
                        cs.exc[k] = ko.cut_counts[k];
                } else {
                    kernels::ops().window_sq_f64(prefix.data() + lo, hi - lo, h,
                                                 center, nullptr, 0, &ko);
                    for (u64 i = lo; i < hi; ++i) {
                        double d = prefix[i + h] - prefix[i] - center;
                        for (std::size_t k = 0; k < cuts.size(); ++k)
                            if (std::fabs(d) > cuts[k]) ++cs.exc[k];
                    }
                }
                cs.sum_sq = ko.sum_sq;
                cs.max_abs = ko.max_abs;
                for (u64 i = lo; i < hi; ++i) {
                    double d = prefix[i + h] - prefix[i] - center;
                    ++cs.hist[hist_bin(d * inv_sqrt_h)];
                }
            });
        } else {
            parts.assign(1, ChunkStats{});
            ChunkStats& cs = parts[0];
            cs.exc.assign(thresholds.size(), 0);
            for (u64 j = 0; j < nwin; j += step) {
                double d = prefix[j + h] - prefix[j] - center;
                double a = std::fabs(d);
                cs.sum_sq += d * d;
                cs.max_abs = std::max(cs.max_abs, a);
                for (std::size_t k = 0; k < cuts.size(); ++k)
                    if (a > cuts[k]) ++cs.exc[k];
                ++cs.hist[hist_bin(d * inv_sqrt_h)];
            }
        }
    }

    // Merge in chunk order (fixed partitioning => deterministic fp sums).
    double sum_sq = 0.0, max_abs = 0.0;
    std::vector<u64> exc(thresholds.size(), 0);
    for (const ChunkStats& cs : parts) {
        sum_sq += cs.sum_sq;
        max_abs = std::max(max_abs, cs.max_abs);
        for (std::size_t k = 0; k < exc.size(); ++k) exc[k] += cs.exc[k];
        for (int b = 0; b < kHistBins; ++b) out.histogram[b] += cs.hist[b];
    }
    out.mean_sq = sum_sq / static_cast<double>(out.count);
    out.normalized_variance =
        out.mean_sq / (static_cast<double>(h) * static_cast<double>(h));
    out.max_abs = max_abs;
    for (std::size_t k = 0; k < thresholds.size(); ++k)
        out.exceptional_counts.emplace_back(thresholds[k], exc[k]);
    return out;
}

void moving_sum_scan(u64 X, u64 h, Weight w,
                     const std::function<void(u64, double)>& emit) {
    if (h < 1) fail_arg("moving_sum_scan requires h >= 1");
    if (h >= X) fail_arg("moving_sum_scan requires h < X");

    const u64 nvals = X + h - 1;  // w(n) for n in (X, 2X-1+h]
    std::vector<double> vals(nvals);
    fill_weights(X + 1, nvals, w, 1, vals.data());

    double s = 0.0;
    for (u64 i = 0; i < h; ++i) s += vals[i];
    emit(X, s);
    for (u64 j = 1; j < X; ++j) {
        s += vals[j + h - 1] - vals[j - 1];
        emit(X + j, s);
    }
}

} // namespace liouville::intervals
