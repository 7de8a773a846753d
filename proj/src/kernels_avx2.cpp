// AVX2+FMA kernel variants. This TU is compiled with -mavx2 -mfma and only
// entered after a runtime cpuid check, so plain intrinsics are safe here.
//
// Integer kernels are bit-exact matches of the scalar reference on arbitrary
// byte/int inputs. Float kernels differ only in summation order and in using
// a vectorized sincos (Cody-Waite two-step FMA reduction + minimax kernels,
// absolute error ~2e-16 for |t| < 2^40; larger arguments fall back to libm).

#include "liouville/kernels.hpp"

#if defined(__x86_64__) && defined(LIOUVILLE_ENABLE_AVX2)

#include <immintrin.h>
#include <cmath>
#include <cstring>

namespace liouville::kernels {
namespace {

inline u64 hsum_epi64(__m256i v) {
    __m128i lo = _mm256_castsi256_si128(v);
    __m128i hi = _mm256_extracti128_si256(v, 1);
    __m128i s = _mm_add_epi64(lo, hi);
    return static_cast<u64>(_mm_extract_epi64(s, 0)) +
           static_cast<u64>(_mm_extract_epi64(s, 1));
}

u64 a_count_odd(const u8* v, std::size_t n) {
    const __m256i one = _mm256_set1_epi8(1);
    const __m256i zero = _mm256_setzero_si256();
    __m256i acc = zero;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(_mm256_and_si256(x, one), zero));
    }
    u64 s = hsum_epi64(acc);
    for (; i < n; ++i) s += v[i] & 1u;
    return s;
}

u64 a_sum_xor2(const u8* a, const u8* b, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i acc = zero;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(_mm256_xor_si256(x, y), zero));
    }
    u64 s = hsum_epi64(acc);
    for (; i < n; ++i) s += a[i] ^ b[i];
    return s;
}

u64 a_sum_xor3(const u8* a, const u8* b, const u8* c, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i acc = zero;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i z = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + i));
        __m256i w = _mm256_xor_si256(_mm256_xor_si256(x, y), z);
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(w, zero));
    }
    u64 s = hsum_epi64(acc);
    for (; i < n; ++i) s += a[i] ^ b[i] ^ c[i];
    return s;
}

void a_window_sq_i32(const i32* prefix, std::size_t nwin, std::size_t h,
                     const i64* cuts, std::size_t ncuts, WindowIntOut* out) {
    __m256i acc_e = _mm256_setzero_si256();
    __m256i acc_o = _mm256_setzero_si256();
    __m256i vmax = _mm256_setzero_si256();
    __m256i cutv[kMaxCuts];
    u64 cc[kMaxCuts] = {};
    for (std::size_t j = 0; j < ncuts; ++j)
        cutv[j] = _mm256_set1_epi32(static_cast<i32>(cuts[j]));
    std::size_t i = 0;
    for (; i + 8 <= nwin; i += 8) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prefix + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prefix + i + h));
        __m256i d = _mm256_sub_epi32(vb, va);
        __m256i ad = _mm256_abs_epi32(d);
        vmax = _mm256_max_epi32(vmax, ad);
        acc_e = _mm256_add_epi64(acc_e, _mm256_mul_epi32(d, d));
        __m256i dodd = _mm256_srli_epi64(d, 32);
        acc_o = _mm256_add_epi64(acc_o, _mm256_mul_epi32(dodd, dodd));
        for (std::size_t j = 0; j < ncuts; ++j) {
            __m256i gt = _mm256_cmpgt_epi32(ad, cutv[j]);
            cc[j] += static_cast<unsigned>(__builtin_popcount(
                _mm256_movemask_ps(_mm256_castsi256_ps(gt))));
        }
    }
    u64 ssq = hsum_epi64(acc_e) + hsum_epi64(acc_o);
    alignas(32) i32 mx8[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(mx8), vmax);
    i64 mx = 0;
    for (int k = 0; k < 8; ++k)
        if (mx8[k] > mx) mx = mx8[k];
    for (; i < nwin; ++i) {
        i64 d = static_cast<i64>(prefix[i + h]) - prefix[i];
        i64 a = d < 0 ? -d : d;
        ssq += static_cast<u64>(d * d);
        if (a > mx) mx = a;
        for (std::size_t j = 0; j < ncuts; ++j) cc[j] += a > cuts[j];
    }
    out->sum_sq = ssq;
    out->max_abs = mx;
    for (std::size_t j = 0; j < ncuts; ++j) out->cut_counts[j] = cc[j];
}

void a_window_sq_f64(const double* prefix, std::size_t nwin, std::size_t h,
                     double center, const double* cuts, std::size_t ncuts,
                     WindowF64Out* out) {
    const __m256d vcenter = _mm256_set1_pd(center);
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    __m256d vmax = _mm256_setzero_pd();
    __m256d cutv[kMaxCuts];
    u64 cc[kMaxCuts] = {};
    for (std::size_t j = 0; j < ncuts; ++j) cutv[j] = _mm256_set1_pd(cuts[j]);
    std::size_t i = 0;
    for (; i + 4 <= nwin; i += 4) {
        __m256d va = _mm256_loadu_pd(prefix + i);
        __m256d vb = _mm256_loadu_pd(prefix + i + h);
        __m256d d = _mm256_sub_pd(_mm256_sub_pd(vb, va), vcenter);
        __m256d ad = _mm256_andnot_pd(signmask, d);
        vmax = _mm256_max_pd(vmax, ad);
        acc = _mm256_fmadd_pd(d, d, acc);
        for (std::size_t j = 0; j < ncuts; ++j) {
            __m256d gt = _mm256_cmp_pd(ad, cutv[j], _CMP_GT_OQ);
            cc[j] += static_cast<unsigned>(__builtin_popcount(_mm256_movemask_pd(gt)));
        }
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double ssq = ((lane[0] + lane[1]) + lane[2]) + lane[3];
    _mm256_store_pd(lane, vmax);
    double mx = lane[0];
    for (int k = 1; k < 4; ++k)
        if (lane[k] > mx) mx = lane[k];
    for (; i < nwin; ++i) {
        double d = (prefix[i + h] - prefix[i]) - center;
        double a = std::fabs(d);
        ssq += d * d;
        if (a > mx) mx = a;
        for (std::size_t j = 0; j < ncuts; ++j) cc[j] += a > cuts[j];
    }
    out->sum_sq = ssq;
    out->max_abs = mx;
    for (std::size_t j = 0; j < ncuts; ++j) out->cut_counts[j] = cc[j];
}

double a_signed_harmonic(const u8* parity, u64 n0, std::size_t len) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d ntwo = _mm256_set1_pd(-2.0);
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d base = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(n0)),
                                 _mm256_setr_pd(0.0, 1.0, 2.0, 3.0));
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        u32 w0, w1;
        std::memcpy(&w0, parity + i, 4);
        std::memcpy(&w1, parity + i + 4, 4);
        __m256d p0 = _mm256_cvtepi32_pd(_mm256_castsi256_si128(
            _mm256_cvtepu8_epi32(_mm_cvtsi32_si128(static_cast<int>(w0)))));
        __m256d p1 = _mm256_cvtepi32_pd(_mm256_castsi256_si128(
            _mm256_cvtepu8_epi32(_mm_cvtsi32_si128(static_cast<int>(w1)))));
        __m256d num0 = _mm256_fmadd_pd(p0, ntwo, one);
        __m256d num1 = _mm256_fmadd_pd(p1, ntwo, one);
        acc0 = _mm256_add_pd(acc0, _mm256_div_pd(num0, base));
        base = _mm256_add_pd(base, four);
        acc1 = _mm256_add_pd(acc1, _mm256_div_pd(num1, base));
        base = _mm256_add_pd(base, four);
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double s = ((lane[0] + lane[1]) + lane[2]) + lane[3];
    for (; i < len; ++i) {
        double v = parity[i] ? -1.0 : 1.0;
        s += v / static_cast<double>(n0 + i);
    }
    return s;
}

// ---- vector sincos ---------------------------------------------------------

// fdlibm minimax coefficients on [-pi/4, pi/4]
constexpr double S1 = -1.66666666666666324348e-01;
constexpr double S2 = 8.33333333332248946124e-03;
constexpr double S3 = -1.98412698298579493134e-04;
constexpr double S4 = 2.75573137070700676789e-06;
constexpr double S5 = -2.50507602534068634195e-08;
constexpr double S6 = 1.58969099521155010221e-10;
constexpr double C1 = 4.16666666666666019037e-02;
constexpr double C2 = -1.38888888888741095749e-03;
constexpr double C3 = 2.48015872894767294178e-05;
constexpr double C4 = -2.75573143513906633035e-07;
constexpr double C5 = 2.08757232129817482790e-09;
constexpr double C6 = -1.13596475577881948265e-11;

inline void sincos4(__m256d t, __m256d* sout, __m256d* cout) {
    const __m256d two_over_pi = _mm256_set1_pd(0x1.45f306dc9c883p-1);
    const __m256d pio2_hi = _mm256_set1_pd(0x1.921fb54442d18p+0);
    const __m256d pio2_mid = _mm256_set1_pd(0x1.1a62633145c07p-54);
    const __m256d signbit = _mm256_set1_pd(-0.0);

    __m256d fn = _mm256_round_pd(_mm256_mul_pd(t, two_over_pi),
                                 _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(fn, pio2_hi, t);
    r = _mm256_fnmadd_pd(fn, pio2_mid, r);

    // quadrant q = fn mod 4, exact since fn is an integral double
    __m256d q4 = _mm256_floor_pd(_mm256_mul_pd(fn, _mm256_set1_pd(0.25)));
    __m256d q = _mm256_fnmadd_pd(q4, _mm256_set1_pd(4.0), fn);

    __m256d z = _mm256_mul_pd(r, r);
    __m256d ps = _mm256_set1_pd(S6);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S5));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S4));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S3));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S2));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S1));
    __m256d sinr = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_set1_pd(C6);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C5));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C4));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C3));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C2));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C1));
    __m256d cosr = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                   _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5),
                                                    _mm256_set1_pd(1.0)));

    __m256d m1 = _mm256_cmp_pd(q, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    __m256d m2 = _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
    __m256d m3 = _mm256_cmp_pd(q, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
    __m256d swap = _mm256_or_pd(m1, m3);
    __m256d sneg = _mm256_or_pd(m2, m3);
    __m256d cneg = _mm256_or_pd(m1, m2);

    __m256d sb = _mm256_blendv_pd(sinr, cosr, swap);
    __m256d cb = _mm256_blendv_pd(cosr, sinr, swap);
    *sout = _mm256_xor_pd(sb, _mm256_and_pd(sneg, signbit));
    *cout = _mm256_xor_pd(cb, _mm256_and_pd(cneg, signbit));
}

// Beyond this the two-step reduction loses accuracy; fall back to libm.
constexpr double kTrigArgLimit = 0x1p40;

void a_phase_dot(const double* logn, const double* re, const double* im,
                 std::size_t n, double y, double* out_re, double* out_im) {
    const __m256d vy = _mm256_set1_pd(y);
    const __m256d limit = _mm256_set1_pd(kTrigArgLimit);
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d sr = _mm256_setzero_pd(), cr = _mm256_setzero_pd();
    __m256d si = _mm256_setzero_pd(), ci = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_mul_pd(vy, _mm256_loadu_pd(logn + i));
        __m256d s, c;
        if (_mm256_movemask_pd(_mm256_cmp_pd(_mm256_andnot_pd(signmask, t),
                                             limit, _CMP_GT_OQ))) {
            alignas(32) double tl[4], sl[4], cl[4];
            _mm256_store_pd(tl, t);
            for (int k = 0; k < 4; ++k) {
                sl[k] = std::sin(tl[k]);
                cl[k] = std::cos(tl[k]);
            }
            s = _mm256_load_pd(sl);
            c = _mm256_load_pd(cl);
        } else {
            sincos4(t, &s, &c);
        }
        __m256d vre = _mm256_loadu_pd(re + i);
        __m256d vim = _mm256_loadu_pd(im + i);
        __m256d tr = _mm256_fmsub_pd(vre, c, _mm256_mul_pd(vim, s));
        __m256d ti = _mm256_fmadd_pd(vre, s, _mm256_mul_pd(vim, c));
        // lane-wise Kahan
        __m256d yr = _mm256_sub_pd(tr, cr);
        __m256d ur = _mm256_add_pd(sr, yr);
        cr = _mm256_sub_pd(_mm256_sub_pd(ur, sr), yr);
        sr = ur;
        __m256d yi = _mm256_sub_pd(ti, ci);
        __m256d ui = _mm256_add_pd(si, yi);
        ci = _mm256_sub_pd(_mm256_sub_pd(ui, si), yi);
        si = ui;
    }
    alignas(32) double lr[4], li[4];
    _mm256_store_pd(lr, sr);
    _mm256_store_pd(li, si);
    double accr = ((lr[0] + lr[1]) + lr[2]) + lr[3];
    double acci = ((li[0] + li[1]) + li[2]) + li[3];
    for (; i < n; ++i) {
        double t = y * logn[i];
        double c = std::cos(t), s = std::sin(t);
        accr += re[i] * c - im[i] * s;
        acci += re[i] * s + im[i] * c;
    }
    *out_re = accr;
    *out_im = acci;
}

} // namespace

const Ops& avx2_ops() {
    static const Ops t = {
        "avx2",
        a_count_odd, a_sum_xor2, a_sum_xor3,
        a_window_sq_i32, a_window_sq_f64,
        a_signed_harmonic, a_phase_dot,
    };
    return t;
}

} // namespace liouville::kernels

#endif // __x86_64__ && LIOUVILLE_ENABLE_AVX2
