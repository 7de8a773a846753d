// Kernel equivalence: the scalar table is the reference; the AVX2 table must
// agree bit-exactly on integer kernels and to tight relative tolerance on
// floating-point kernels (different summation order, vectorized sincos).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "liouville/kernels.hpp"
#include "liouville/rng.hpp"

using namespace liouville;
using kernels::Ops;

namespace {

std::vector<u8> random_bytes(u64 seed, std::size_t n, u8 mask) {
    CounterRng rng(seed);
    std::vector<u8> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = static_cast<u8>(rng.word(7, i) & mask);
    return v;
}

std::vector<double> random_doubles(u64 seed, std::size_t n, double lo, double hi) {
    CounterRng rng(seed);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * rng.uniform(9, i);
    return v;
}

bool rel_close(double a, double b, double tol) {
    double m = std::max(std::abs(a), std::abs(b));
    return m < 1e-12 || std::abs(a - b) <= tol * m;
}

} // namespace

TEST_CASE("scalar count_odd / xor sums against direct loops") {
    const Ops& s = kernels::scalar_ops();
    for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(31),
                          std::size_t(32), std::size_t(1000)}) {
        auto a = random_bytes(1, n, 0xff);  // arbitrary bytes: parity == bit 0
        auto b = random_bytes(2, n, 0x01);
        auto c = random_bytes(3, n, 0x01);
        u64 odd = 0, x2 = 0, x3 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            odd += a[i] & 1;
            x2 += (a[i] & 1) ^ b[i];
            x3 += (a[i] & 1) ^ b[i] ^ c[i];
        }
        CHECK(s.count_odd(a.data(), n) == odd);
        std::vector<u8> a1(n);
        for (std::size_t i = 0; i < n; ++i) a1[i] = a[i] & 1;
        CHECK(s.sum_xor2(a1.data(), b.data(), n) == x2);
        CHECK(s.sum_xor3(a1.data(), b.data(), c.data(), n) == x3);
    }
}

TEST_CASE("scalar window_sq_i32 against direct window sums") {
    const Ops& s = kernels::scalar_ops();
    std::size_t len = 4000, h = 37;
    CounterRng rng(4);
    std::vector<i32> prefix(len + 1, 0);
    for (std::size_t i = 0; i < len; ++i)
        prefix[i + 1] = prefix[i] + (rng.sign(1, i) > 0 ? 1 : -1);
    std::size_t nwin = len - h + 1;
    i64 cuts[2] = {5, 11};
    kernels::WindowIntOut out;
    s.window_sq_i32(prefix.data(), nwin, h, cuts, 2, &out);
    u64 sum_sq = 0, c0 = 0, c1 = 0;
    i64 max_abs = 0;
    for (std::size_t i = 0; i < nwin; ++i) {
        i64 d = i64(prefix[i + h]) - i64(prefix[i]);
        sum_sq += u64(d * d);
        max_abs = std::max(max_abs, std::abs(d));
        c0 += std::abs(d) > cuts[0];
        c1 += std::abs(d) > cuts[1];
    }
    CHECK(out.sum_sq == sum_sq);
    CHECK(out.max_abs == max_abs);
    CHECK(out.cut_counts[0] == c0);
    CHECK(out.cut_counts[1] == c1);
}

TEST_CASE("scalar signed_harmonic and phase_dot against libm loops") {
    const Ops& s = kernels::scalar_ops();
    std::size_t n = 2000;
    auto par = random_bytes(5, n, 0x01);
    double direct = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        direct += (par[i] ? -1.0 : 1.0) / double(100 + i);
    CHECK(rel_close(s.signed_harmonic(par.data(), 100, n), direct, 1e-12));

    auto logn = random_doubles(6, n, 0.0, 16.0);
    auto re = random_doubles(7, n, -1.0, 1.0);
    auto im = random_doubles(8, n, -1.0, 1.0);
    for (double y : {0.0, 0.5, -3.25, 1000.0}) {
        double dr = 0.0, di = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double cr = std::cos(y * logn[i]), sr = std::sin(y * logn[i]);
            dr += re[i] * cr - im[i] * sr;
            di += re[i] * sr + im[i] * cr;
        }
        double kr = 0.0, ki = 0.0;
        s.phase_dot(logn.data(), re.data(), im.data(), n, y, &kr, &ki);
        CHECK(rel_close(kr, dr, 1e-11));
        CHECK(rel_close(ki, di, 1e-11));
    }
}

TEST_CASE("avx2 integer kernels bit-exact vs scalar") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 unavailable; skipping");
        return;
    }
    const Ops& s = kernels::scalar_ops();
    const Ops& v = kernels::avx2_ops();
    for (u64 seed = 0; seed < 8; ++seed) {
        std::size_t n = 777 + 97 * seed;  // odd tails exercise the scalar rim
        auto a = random_bytes(seed * 3 + 1, n, 0xff);
        auto b = random_bytes(seed * 3 + 2, n, 0x01);
        auto c = random_bytes(seed * 3 + 3, n, 0x01);
        CHECK(v.count_odd(a.data(), n) == s.count_odd(a.data(), n));
        std::vector<u8> a1(n);
        for (std::size_t i = 0; i < n; ++i) a1[i] = a[i] & 1;
        CHECK(v.sum_xor2(a1.data(), b.data(), n) == s.sum_xor2(a1.data(), b.data(), n));
        CHECK(v.sum_xor3(a1.data(), b.data(), c.data(), n) ==
              s.sum_xor3(a1.data(), b.data(), c.data(), n));

        std::size_t h = 16 + seed;
        CounterRng rng(seed);
        std::size_t len = 3000;
        std::vector<i32> prefix(len + 1, 0);
        for (std::size_t i = 0; i < len; ++i)
            prefix[i + 1] = prefix[i] + rng.sign(2, i);
        i64 cuts[3] = {1, 4, 9};
        kernels::WindowIntOut so, vo;
        s.window_sq_i32(prefix.data(), len - h + 1, h, cuts, 3, &so);
        v.window_sq_i32(prefix.data(), len - h + 1, h, cuts, 3, &vo);
        CHECK(so.sum_sq == vo.sum_sq);
        CHECK(so.max_abs == vo.max_abs);
        for (int j = 0; j < 3; ++j) CHECK(so.cut_counts[j] == vo.cut_counts[j]);
    }
}

TEST_CASE("avx2 floating kernels within tolerance of scalar") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 unavailable; skipping");
        return;
    }
    const Ops& s = kernels::scalar_ops();
    const Ops& v = kernels::avx2_ops();

    std::size_t n = 5000;
    auto par = random_bytes(11, n, 0x01);
    CHECK(rel_close(v.signed_harmonic(par.data(), 3, n),
                    s.signed_harmonic(par.data(), 3, n), 1e-12));

    std::size_t len = 4096, h = 64;
    auto vals = random_doubles(12, len, -2.0, 2.0);
    std::vector<double> prefix(len + 1, 0.0);
    for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + vals[i];
    double cuts[2] = {3.0, 20.0};
    kernels::WindowF64Out so, vo;
    s.window_sq_f64(prefix.data(), len - h + 1, h, 1.5, cuts, 2, &so);
    v.window_sq_f64(prefix.data(), len - h + 1, h, 1.5, cuts, 2, &vo);
    CHECK(rel_close(so.sum_sq, vo.sum_sq, 1e-11));
    CHECK(so.max_abs == doctest::Approx(vo.max_abs).epsilon(1e-12));
    // cut counts are integer decisions on |d - center| vs cut; windows of
    // sums of ~64 doubles stay far from the cut in this fixture
    CHECK(so.cut_counts[0] == vo.cut_counts[0]);
    CHECK(so.cut_counts[1] == vo.cut_counts[1]);

    auto logn = random_doubles(13, n, 0.0, 20.0);
    auto re = random_doubles(14, n, -1.0, 1.0);
    auto im = random_doubles(15, n, -1.0, 1.0);
    for (double y : {0.0, 1.0, -17.75, 523.0, 1.0e6}) {
        double sr, si, vr, vi;
        s.phase_dot(logn.data(), re.data(), im.data(), n, y, &sr, &si);
        v.phase_dot(logn.data(), re.data(), im.data(), n, y, &vr, &vi);
        // absolute tolerance scaled by the l1 mass: the sums themselves can
        // cancel to near zero
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            scale += std::abs(re[i]) + std::abs(im[i]);
        CHECK(std::abs(sr - vr) <= 1e-11 * scale);
        CHECK(std::abs(si - vi) <= 1e-11 * scale);
    }
}

TEST_CASE("vectorized sincos accuracy vs libm across magnitudes") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 unavailable; skipping");
        return;
    }
    const Ops& v = kernels::avx2_ops();
    // a full 4-lane batch with one unit coefficient isolates lane-0 sincos
    for (double arg : {1e-8, 0.1, 1.0, 3.14159, 100.0, 1e4, 1e8, 0x1.8p39}) {
        double logn[4] = {1.0, 0.0, 0.0, 0.0};
        double re[4] = {1.0, 0.0, 0.0, 0.0};
        double im[4] = {0.0, 0.0, 0.0, 0.0};
        double vr, vi;
        v.phase_dot(logn, re, im, 4, arg, &vr, &vi);
        CHECK(std::abs(vr - std::cos(arg)) < 5e-14);
        CHECK(std::abs(vi - std::sin(arg)) < 5e-14);
    }
    // beyond the reduction range the kernel falls back to libm: exact match
    double logn[4] = {1.0, 0.0, 0.0, 0.0};
    double re[4] = {1.0, 0.0, 0.0, 0.0};
    double im[4] = {0.0, 0.0, 0.0, 0.0};
    double vr, vi;
    double big = 0x1.0p44;
    v.phase_dot(logn, re, im, 4, big, &vr, &vi);
    CHECK(vr == std::cos(big));
    CHECK(vi == std::sin(big));
}

TEST_CASE("force_dispatch switches the runtime table") {
    kernels::force_dispatch("scalar");
    CHECK(std::string(kernels::ops().name) == "scalar");
    if (kernels::avx2_available()) {
        kernels::force_dispatch("avx2");
        CHECK(std::string(kernels::ops().name) == "avx2");
    }
    kernels::force_dispatch("auto");
    CHECK(std::string(kernels::ops().name) ==
          (kernels::avx2_available() ? "avx2" : "scalar"));
    CHECK_THROWS_AS(kernels::force_dispatch("sse9"), std::invalid_argument);
}
