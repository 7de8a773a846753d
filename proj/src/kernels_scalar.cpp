// Scalar reference kernels. These define the semantics; the SIMD variants
// must match them (exactly for integer kernels, to tolerance for float ones).

#include <cmath>

#include "liouville/kernels.hpp"

namespace liouville::kernels {
namespace {

u64 s_count_odd(const u8* v, std::size_t n) {
    u64 s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i] & 1u;
    return s;
}

u64 s_sum_xor2(const u8* a, const u8* b, std::size_t n) {
    u64 s = 0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] ^ b[i];
    return s;
}

u64 s_sum_xor3(const u8* a, const u8* b, const u8* c, std::size_t n) {
    u64 s = 0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] ^ b[i] ^ c[i];
    return s;
}

void s_window_sq_i32(const i32* prefix, std::size_t nwin, std::size_t h,
                     const i64* cuts, std::size_t ncuts, WindowIntOut* out) {
    u64 ssq = 0;
    i64 mx = 0;
    u64 cc[kMaxCuts] = {};
    for (std::size_t i = 0; i < nwin; ++i) {
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

void s_window_sq_f64(const double* prefix, std::size_t nwin, std::size_t h,
                     double center, const double* cuts, std::size_t ncuts,
                     WindowF64Out* out) {
    double ssq = 0.0, mx = 0.0;
    u64 cc[kMaxCuts] = {};
    for (std::size_t i = 0; i < nwin; ++i) {
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

double s_signed_harmonic(const u8* parity, u64 n0, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        double v = parity[i] ? -1.0 : 1.0;
        s += v / static_cast<double>(n0 + i);
    }
    return s;
}

void s_phase_dot(const double* logn, const double* re, const double* im,
                 std::size_t n, double y, double* out_re, double* out_im) {
    // Kahan-compensated on both components.
    double sr = 0.0, cr_ = 0.0, si = 0.0, ci_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = y * logn[i];
        double c = std::cos(t), s = std::sin(t);
        double tr = re[i] * c - im[i] * s;
        double ti = re[i] * s + im[i] * c;
        double yr = tr - cr_;
        double ur = sr + yr;
        cr_ = (ur - sr) - yr;
        sr = ur;
        double yi = ti - ci_;
        double ui = si + yi;
        ci_ = (ui - si) - yi;
        si = ui;
    }
    *out_re = sr;
    *out_im = si;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops t = {
        "scalar",
        s_count_odd, s_sum_xor2, s_sum_xor3,
        s_window_sq_i32, s_window_sq_f64,
        s_signed_harmonic, s_phase_dot,
    };
    return t;
}

} // namespace liouville::kernels
