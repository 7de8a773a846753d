#pragma once
// Hot-loop kernels with a scalar reference implementation and an AVX2+FMA
// variant selected at runtime. Integer kernels are bit-exact across variants;
// floating-point kernels agree to tolerance (different summation order and a
// vectorized sincos), which the kernel equivalence tests pin down.
//
// Contracts the callers rely on:
//   count_odd        sum of (v[i] & 1) over 0/1-or-omega byte arrays
//   sum_xor2/3       sum of xor of parity byte arrays (values in {0,1})
//   window_sq_i32    windows d_i = prefix[i+h] - prefix[i]; returns sum d^2,
//                    max |d|, and counts of |d| > cut_j. Caller must keep
//                    nwin * max(d^2) below 2^63 (chunked by the scan driver).
//   window_sq_f64    same with double prefix and centered windows d - center
//   signed_harmonic  sum of (1 - 2*parity[i]) / (n0 + i)
//   phase_dot        sum of (re[i] + i*im[i]) * exp(i * y * logn[i]),
//                    compensated per accumulator lane

#include <cstddef>

#include "liouville/common.hpp"

namespace liouville::kernels {

constexpr std::size_t kMaxCuts = 8;

struct WindowIntOut {
    u64 sum_sq = 0;
    i64 max_abs = 0;
    u64 cut_counts[kMaxCuts] = {};
};

struct WindowF64Out {
    double sum_sq = 0.0;
    double max_abs = 0.0;
    u64 cut_counts[kMaxCuts] = {};
};

struct Ops {
    const char* name;
    u64 (*count_odd)(const u8* v, std::size_t n);
    u64 (*sum_xor2)(const u8* a, const u8* b, std::size_t n);
    u64 (*sum_xor3)(const u8* a, const u8* b, const u8* c, std::size_t n);
    void (*window_sq_i32)(const i32* prefix, std::size_t nwin, std::size_t h,
                          const i64* cuts, std::size_t ncuts, WindowIntOut* out);
    void (*window_sq_f64)(const double* prefix, std::size_t nwin, std::size_t h,
                          double center, const double* cuts, std::size_t ncuts,
                          WindowF64Out* out);
    double (*signed_harmonic)(const u8* parity, u64 n0, std::size_t len);
    void (*phase_dot)(const double* logn, const double* re, const double* im,
                      std::size_t n, double y, double* out_re, double* out_im);
};

const Ops& scalar_ops();

// Compiled-in and CPU-supported, i.e. usable right now.
bool avx2_available();
// Valid only when avx2_available(); used directly by the equivalence tests.
const Ops& avx2_ops();

// Runtime-selected table. Honors LIOUVILLE_LAB_SIMD=scalar|avx2|auto (set
// before first use) and force_dispatch().
const Ops& ops();

// Explicit override, mainly for tests and the CLI --simd flag. Passing
// "avx2" on hardware without AVX2 is an error.
void force_dispatch(const char* name);

} // namespace liouville::kernels
