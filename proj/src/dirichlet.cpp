#include "liouville/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "liouville/kernels.hpp"
#include "liouville/parallel.hpp"
#include "liouville/rng.hpp"
#include "liouville/sieve.hpp"

namespace liouville::dirichlet {

namespace {

constexpr u64 kChunk = u64(1) << 21;
constexpr u64 kGridBudget = 6'000'000;  // max quadrature points per integral
constexpr double kTiny = 1e-300;

std::vector<i8> lambda_array(u64 lo, u64 hi, unsigned threads = 1) {
    std::vector<i8> out(hi - lo + 1);
    run_range_chunks(lo, hi, u64(1) << 22, threads, [&](u64, u64 clo, u64 chi) {
        FactorTable t = sieve_segment(clo, chi, {});
        const u8* om = t.omega_data();
        for (u64 i = 0; i <= chi - clo; ++i)
            out[clo - lo + i] = (om[i] & 1) ? i8(-1) : i8(1);
    });
    return out;
}

} // namespace

// ---- evaluation ---------------------------------------------------------------

PackedPoly PackedPoly::pack(const DirichletPolynomial& poly) {
    PackedPoly p;
    if (poly.is_zero()) return p;
    for (u64 v = poly.support_lo; v <= poly.support_hi; ++v) {
        std::complex<double> c = poly.coeffs[v - poly.support_lo];
        if (c.real() == 0.0 && c.imag() == 0.0) continue;
        p.n.push_back(v);
        p.logn.push_back(std::log(static_cast<double>(v)));
        p.re.push_back(c.real());
        p.im.push_back(c.imag());
        p.sum_abs += std::abs(c);
        p.sum_abs2 += std::norm(c);
    }
    if (!p.n.empty()) {
        p.n_min = p.n.front();
        p.n_max = p.n.back();
    }
    return p;
}

std::complex<double> PackedPoly::eval(double y) const {
    if (logn.empty()) return {0.0, 0.0};
    double r = 0.0, i = 0.0;
    kernels::ops().phase_dot(logn.data(), re.data(), im.data(), logn.size(), y,
                             &r, &i);
    return {r, i};
}

double PackedPoly::abs2(double y) const { return std::norm(eval(y)); }

std::complex<double> evaluate(const DirichletPolynomial& poly, double y) {
    return PackedPoly::pack(poly).eval(y);
}

DirichletPolynomial lambda_poly(u64 lo, u64 hi) {
    if (lo < 1 || lo > hi) fail_arg("lambda_poly range invalid");
    if (hi - lo + 1 > (u64(1) << 26)) fail_arg("lambda_poly range too large");
    std::vector<i8> lam = lambda_array(lo, hi);
    DirichletPolynomial poly;
    poly.support_lo = lo;
    poly.support_hi = hi;
    poly.coeffs.resize(hi - lo + 1);
    for (u64 i = 0; i <= hi - lo; ++i)
        poly.coeffs[i] = {static_cast<double>(lam[i]), 0.0};
    return poly;
}

DirichletPolynomial random_unit_poly(u64 N, u64 seed, u64 stream) {
    if (N < 1) fail_arg("random_unit_poly requires N >= 1");
    if (N > (u64(1) << 26)) fail_arg("random_unit_poly range too large");
    CounterRng rng(seed);
    DirichletPolynomial poly;
    poly.support_lo = 1;
    poly.support_hi = N;
    poly.coeffs.resize(N);
    for (u64 n = 1; n <= N; ++n) {
        double re, im;
        rng.unit_phase(stream, n, re, im);
        poly.coeffs[n - 1] = {re, im};
    }
    return poly;
}

DirichletPolynomial prime_ones_poly(u64 P) {
    if (P < 2) fail_arg("prime_ones_poly requires P >= 2");
    if (P > (u64(1) << 26)) fail_arg("prime_ones_poly range too large");
    PrimeList pl = primes_in(1, P);
    DirichletPolynomial poly;
    poly.provenance = "prime-restricted";
    poly.support_lo = 1;
    poly.support_hi = P;
    poly.coeffs.assign(P, {0.0, 0.0});
    for (u64 p : pl.primes) poly.coeffs[p - 1] = {1.0, 0.0};
    return poly;
}

// ---- quadrature ---------------------------------------------------------------

namespace {

struct QuadOut {
    double value = 0.0;   // refined estimate
    double coarse = 0.0;  // plain trapezoid at the base step
    double step = 0.0;
    u64 points = 0;
};

// Trapezoid at step h and h/2 over one shared fine grid, combined by
// Richardson extrapolation. Fixed evaluation order keeps the sum bytes
// deterministic.
template <class G>
QuadOut rich_trapezoid(const G& g, double a, double b, double step,
                       bool richardson) {
    u64 N = std::max<u64>(8, static_cast<u64>(std::ceil((b - a) / step)));
    if (!richardson) {
        N = std::min(N, kGridBudget);
        double h = (b - a) / static_cast<double>(N);
        double s = 0.5 * (g(a) + g(b));
        for (u64 j = 1; j < N; ++j) s += g(a + static_cast<double>(j) * h);
        return {s * h, s * h, h, N + 1};
    }
    N = std::min(N, kGridBudget / 2);
    u64 M = 2 * N;
    double h2 = (b - a) / static_cast<double>(M);
    double f0 = g(a), fM = g(b);
    double sum_all = 0.0, sum_even = 0.0;
    for (u64 j = 1; j < M; ++j) {
        double v = g(a + static_cast<double>(j) * h2);
        sum_all += v;
        if ((j & 1) == 0) sum_even += v;
    }
    double ih = 2.0 * h2 * (0.5 * (f0 + fM) + sum_even);
    double ih2 = h2 * (0.5 * (f0 + fM) + sum_all);
    return {(4.0 * ih2 - ih) / 3.0, ih, 2.0 * h2, M + 1};
}

double auto_step(double n_max, double span) {
    double osc = 1.0 / (8.0 * std::max(1.0, std::log(std::max(2.0, n_max))));
    return std::min(osc, span / 5000.0);
}

// Integral of |running coefficient sum|^2 between consecutive breakpoints;
// events carry the signed coefficient delta at each position. Exact up to fp
// rounding in the running sum -- no discretization error.
double sweep_square_integral(
    std::vector<std::pair<double, std::complex<double>>>& events) {
    std::sort(events.begin(), events.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    double total = 0.0, prev = 0.0;
    std::complex<double> s{0.0, 0.0};
    bool first = true;
    for (const auto& [pos, da] : events) {
        if (!first && pos > prev) total += std::norm(s) * (pos - prev);
        s += da;
        prev = pos;
        first = false;
    }
    return total;
}

} // namespace

// ---- Plancherel ----------------------------------------------------------------

PlancherelResult plancherel_check(const DirichletPolynomial& poly, double T,
                                  const QuadratureParams& quad) {
    if (!(T >= 1.0)) fail_arg("plancherel_check requires T >= 1");
    PackedPoly pp = PackedPoly::pack(poly);
    PlancherelResult out;
    if (pp.nnz() == 0) return out;

    // lhs: integrand in u = log x is piecewise constant with breakpoints at
    // log n -/+ 1/T; n is inside the window exactly for u in that interval.
    std::vector<std::pair<double, std::complex<double>>> ev;
    ev.reserve(2 * pp.nnz());
    for (std::size_t i = 0; i < pp.nnz(); ++i) {
        std::complex<double> c{pp.re[i], pp.im[i]};
        ev.emplace_back(pp.logn[i] - 1.0 / T, c);
        ev.emplace_back(pp.logn[i] + 1.0 / T, -c);
    }
    out.lhs = sweep_square_integral(ev);

    // rhs: the diagonal integrates to sum|a|^2 * pi/T exactly; the cross part
    // |A(y)|^2 - sum|a|^2 is handled by quadrature over [-Y, Y].
    double y_max = quad.y_max_hint > 0.0
                       ? quad.y_max_hint
                       : std::max(2000.0, 240.0 * T);
    double step = quad.step_hint > 0.0
                      ? quad.step_hint
                      : auto_step(static_cast<double>(pp.n_max), 2.0 * y_max);
    double diag = 2.0 * pp.sum_abs2 / T;
    auto kernel = [&](double y) {
        if (std::fabs(y) < 1e-9) return 1.0 / (T * T);
        double s = std::sin(y / T) / y;
        return s * s;
    };
    auto cross = [&](double y) { return (pp.abs2(y) - pp.sum_abs2) * kernel(y); };
    QuadOut q = rich_trapezoid(cross, -y_max, y_max, step, quad.richardson);
    constexpr double kTwoOverPi = 2.0 / 3.14159265358979323846;
    out.rhs = diag + kTwoOverPi * q.value;
    out.rel_err = std::fabs(out.lhs - out.rhs) / std::max(out.lhs, kTiny);
    out.y_max = y_max;
    out.step = q.step;
    out.grid_points = q.points;
    out.tail_bound = kTwoOverPi *
                     std::max(0.0, pp.sum_abs * pp.sum_abs - pp.sum_abs2) * 2.0 /
                     y_max;
    out.quad_ok = std::fabs(q.coarse - q.value) <=
                  1e-3 * std::max({std::fabs(out.rhs), std::fabs(q.value), 1e-12});
    return out;
}

// ---- Saffari-Vaughan ------------------------------------------------------------

SaffariVaughanResult saffari_vaughan_ratio(const DirichletPolynomial& poly,
                                           double h, double X, double c1,
                                           double c2,
                                           const QuadratureParams& quad) {
    if (!(X > 0.0) || !(c1 > 0.0) || !(c2 >= c1))
        fail_arg("saffari_vaughan_ratio requires X > 0 and 0 < c1 <= c2");
    if (!(h >= 1.0) || !(h <= c1 * X / 10.0))
        fail_arg("h out of range (need 1 <= h <= c1*X/10)");
    SaffariVaughanResult out;
    PackedPoly pp = PackedPoly::pack(poly);
    if (pp.nnz() == 0) return out;  // 0/0 guarded: zero polynomial -> 0
    if (static_cast<double>(pp.n_min) < c1 * X - 1e-9 ||
        static_cast<double>(pp.n_max) > c2 * X + 1e-9)
        fail_arg("polynomial support must lie within [c1*X, c2*X]");

    // lhs: n contributes to the window (x, x+h] exactly for x in [n-h, n).
    std::vector<std::pair<double, std::complex<double>>> ev;
    ev.reserve(2 * pp.nnz());
    for (std::size_t i = 0; i < pp.nnz(); ++i) {
        std::complex<double> c{pp.re[i], pp.im[i]};
        double n = static_cast<double>(pp.n[i]);
        ev.emplace_back(n - h, c);
        ev.emplace_back(n, -c);
    }
    out.lhs = sweep_square_integral(ev);

    double plateau = (h / (c1 * X)) * (h / (c1 * X));
    auto kern = [&](double y) {
        double yy = y * y;
        if (yy * plateau <= 1.0) return plateau;  // |y| <= c1 X / h
        return 1.0 / yy;
    };
    auto g = [&](double y) { return pp.abs2(y) * kern(y); };
    double y_max = quad.y_max_hint > 0.0 ? quad.y_max_hint
                                         : std::max(2000.0, 4.0 * c1 * X / h);
    double step = quad.step_hint > 0.0
                      ? quad.step_hint
                      : auto_step(static_cast<double>(pp.n_max), 2.0 * y_max);
    QuadOut q = rich_trapezoid(g, -y_max, y_max, step, quad.richardson);
    out.rhs_integral = q.value;
    out.denom = (c2 * c2 / c1) * X * out.rhs_integral;
    out.ratio = out.denom > 0.0 ? out.lhs / out.denom : 0.0;
    return out;
}

// ---- mean value ------------------------------------------------------------------

MeanValueResult mean_value_ratio(const DirichletPolynomial& poly, double T,
                                 const QuadratureParams& quad) {
    if (!(T >= 1.0)) fail_arg("mean_value_ratio requires T >= 1");
    MeanValueResult out;
    PackedPoly pp = PackedPoly::pack(poly);
    if (pp.nnz() == 0) return out;

    auto g = [&](double t) { return pp.abs2(t); };
    double step = quad.step_hint > 0.0
                      ? quad.step_hint
                      : auto_step(static_cast<double>(pp.n_max), 2.0 * T);
    QuadOut q = rich_trapezoid(g, -T, T, step, quad.richardson);
    out.integral = q.value;
    out.grid_points = q.points;
    out.denom = (T + static_cast<double>(pp.n_max)) * pp.sum_abs2;
    out.ratio = out.integral / out.denom;
    out.quad_ok = std::fabs(q.coarse - q.value) <=
                  1e-3 * std::max(std::fabs(q.value), 1e-12);
    return out;
}

// ---- large values ----------------------------------------------------------------

namespace {

void check_prime_support(const PackedPoly& pp, u64 P) {
    if (pp.nnz() == 0) return;
    if (pp.n_max > P) fail_arg("coefficient support exceeds P");
    FactorTable t = sieve_segment(pp.n_min, pp.n_max, {});
    for (std::size_t i = 0; i < pp.nnz(); ++i) {
        if (!t.is_prime(pp.n[i]))
            fail_arg("coefficients must be supported on primes");
        double a = std::hypot(pp.re[i], pp.im[i]);
        if (a > 1.0 + 1e-12) fail_arg("prime coefficients must satisfy |a(p)| <= 1");
    }
}

} // namespace

LargeValuesResult large_values_measure(const DirichletPolynomial& prime_poly,
                                       u64 P, double T, double V,
                                       double grid_step) {
    if (P < 2) fail_arg("large_values_measure requires P >= 2");
    if (!(T > 0.0)) fail_arg("large_values_measure requires T > 0");
    if (!(V >= 3.0)) fail_arg("large_values_measure requires V >= 3");
    double coarse_limit = 1.0 / (4.0 * std::log(static_cast<double>(P)));
    if (!(grid_step > 0.0) || grid_step > coarse_limit + 1e-15)
        fail_arg("grid too coarse: need grid_step <= 1/(4 log P)");

    PackedPoly pp = PackedPoly::pack(prime_poly);
    check_prime_support(pp, P);

    u64 pi_p = primes_in(1, P).primes.size();
    double threshold = static_cast<double>(pi_p) / V;
    double thr2 = threshold * threshold;

    LargeValuesResult out;
    out.pi_p = pi_p;
    out.threshold = threshold;
    out.set.T = T;
    out.set.grid_step = grid_step;
    u64 npts = static_cast<u64>(std::floor(2.0 * T / grid_step + 1e-9)) + 1;
    for (u64 i = 0; i < npts; ++i) {
        double t = -T + static_cast<double>(i) * grid_step;
        if (pp.abs2(t) >= thr2) out.set.member_points.push_back(t);
    }
    out.set.measure_estimate = std::min(
        grid_step * static_cast<double>(out.set.member_points.size()), 2.0 * T);
    double logT = std::log(T);
    double logP = std::log(static_cast<double>(P));
    out.bound = logT > 0.0
                    ? std::pow(V * V * logT, 1.0 + logT / logP)
                    : 0.0;
    return out;
}

// ---- Halasz-Montgomery ------------------------------------------------------------

HalaszMontgomeryResult halasz_montgomery_ratio(const DirichletPolynomial& poly,
                                               const ExceptionalSet& E, double T,
                                               bool prime_variant, double eps) {
    if (!(T >= 2.0)) fail_arg("halasz_montgomery_ratio requires T >= 2");
    for (double t : E.member_points)
        if (std::fabs(t) > T + 1e-9)
            fail_arg("exceptional set point outside [-T, T]");

    HalaszMontgomeryResult out;
    PackedPoly pp = PackedPoly::pack(poly);
    if (pp.nnz() == 0 || E.member_points.empty()) return out;  // empty E -> 0

    double acc = 0.0;
    for (double t : E.member_points) acc += pp.abs2(t);
    out.integral = E.grid_step * acc;

    double measure = E.measure_estimate;
    if (prime_variant) {
        check_prime_support(pp, pp.n_max);
        double P = static_cast<double>(pp.n_max);
        double logP = std::log(P);
        double damp = std::exp(-logP / std::pow(std::log(T + P), 2.0 / 3.0 + eps));
        out.denom = (P / logP + measure * P * damp) * pp.sum_abs2;
    } else {
        double N = static_cast<double>(pp.n_max);
        out.denom = (N + measure * std::sqrt(T) * std::log(T)) * pp.sum_abs2;
    }
    out.ratio = out.integral / out.denom;
    return out;
}

// ---- twisted sums -----------------------------------------------------------------

TwistKind parse_twist_kind(const std::string& s) {
    if (s == "liouville") return TwistKind::liouville;
    if (s == "primes") return TwistKind::primes;
    fail_arg("unknown twist kind (expected liouville or primes)");
}

std::vector<TwistPoint> twisted_sum_profile(TwistKind kind, u64 x,
                                            const std::vector<double>& t_values,
                                            unsigned threads) {
    if (x < 2) fail_arg("twisted_sum_profile requires x >= 2");
    if (x > 100'000'000ULL) fail_arg("twisted_sum_profile budget is x <= 1e8");

    const std::size_t nt_vals = t_values.size();
    u64 nchunks = ceil_div(x, kChunk);
    std::vector<std::vector<std::complex<double>>> parts(
        nchunks, std::vector<std::complex<double>>(nt_vals, {0.0, 0.0}));
    std::vector<u64> prime_counts(nchunks, 0);

    unsigned nt = resolve_threads(threads);
    run_chunks(nchunks, nt, [&](u64 c) {
        u64 lo = 1 + c * kChunk, hi = std::min(x, lo + kChunk - 1);
        FactorTable tab = sieve_segment(lo, hi, {});
        std::vector<double> logn, re, im;
        u64 len = hi - lo + 1;
        logn.reserve(len);
        re.reserve(len);
        if (kind == TwistKind::liouville) {
            const u8* om = tab.omega_data();
            for (u64 n = lo; n <= hi; ++n) {
                logn.push_back(std::log(static_cast<double>(n)));
                re.push_back((om[n - lo] & 1) ? -1.0 : 1.0);
            }
        } else {
            for (u64 n = lo; n <= hi; ++n) {
                if (!tab.is_prime(n)) continue;
                logn.push_back(std::log(static_cast<double>(n)));
                re.push_back(1.0);
            }
            prime_counts[c] = logn.size();
        }
        im.assign(logn.size(), 0.0);
        for (std::size_t j = 0; j < nt_vals; ++j) {
            double r = 0.0, i = 0.0;
            kernels::ops().phase_dot(logn.data(), re.data(), im.data(),
                                     logn.size(), t_values[j], &r, &i);
            parts[c][j] = {r, i};
        }
    });

    u64 pi_x = 0;
    std::vector<std::complex<double>> sums(nt_vals, {0.0, 0.0});
    for (u64 c = 0; c < nchunks; ++c) {
        pi_x += prime_counts[c];
        for (std::size_t j = 0; j < nt_vals; ++j) sums[j] += parts[c][j];
    }

    double trivial = kind == TwistKind::liouville ? static_cast<double>(x)
                                                  : static_cast<double>(pi_x);
    std::vector<TwistPoint> out(nt_vals);
    for (std::size_t j = 0; j < nt_vals; ++j) {
        out[j].t = t_values[j];
        out[j].abs_sum = std::abs(sums[j]);
        out[j].trivial_bound = trivial;
        out[j].ratio = trivial > 0.0 ? out[j].abs_sum / trivial : 0.0;
    }
    return out;
}

// ---- decomposition ----------------------------------------------------------------

namespace {

struct LayerPrimes {
    LayerInfo info;
    // primes grouped per block, indices aligned with info.blocks
    std::vector<std::vector<u64>> block_primes;
};

LayerPrimes build_layer(const PrimeInterval& iv) {
    LayerPrimes lp;
    lp.info.interval = iv;
    PrimeList pl = primes_in(iv.lo, iv.hi);
    lp.info.prime_count = pl.primes.size();
    for (u64 p : pl.primes) lp.info.W += 1.0 / static_cast<double>(p);

    std::size_t at = 0;
    for (u64 b_lo = iv.lo; b_lo <= iv.hi; b_lo <<= 1) {
        DyadicBlock blk;
        blk.nominal_lo = b_lo;
        blk.nominal_hi = b_lo << 1;
        blk.lo = b_lo;
        blk.hi = std::min(iv.hi, blk.nominal_hi - 1);
        std::vector<u64> ps;
        while (at < pl.primes.size() && pl.primes[at] <= blk.hi)
            ps.push_back(pl.primes[at++]);
        blk.prime_count = ps.size();
        lp.info.blocks.push_back(blk);
        lp.block_primes.push_back(std::move(ps));
        if (blk.nominal_hi > iv.hi) break;
    }
    return lp;
}

} // namespace

std::pair<PrimeBlockDecomposition, DirichletPolynomial> build_decomposition(
    const std::vector<PrimeInterval>& layers, u64 X) {
    if (X < 2) fail_arg("build_decomposition requires X >= 2");
    if (layers.empty()) fail_arg("build_decomposition requires at least one layer");
    for (const PrimeInterval& iv : layers)
        if (iv.lo < 2 || iv.lo > iv.hi)
            fail_arg("invalid layer interval (need 2 <= lo <= hi)");
    std::vector<PrimeInterval> sorted = layers;
    std::sort(sorted.begin(), sorted.end(),
              [](const PrimeInterval& a, const PrimeInterval& b) {
                  return a.lo < b.lo;
              });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].lo <= sorted[i - 1].hi)
            fail_arg("overlapping layers rejected");
    u128 min_prod = 1;
    for (const PrimeInterval& iv : layers) min_prod *= iv.lo;
    if (min_prod >= X)
        fail_arg("product of layer minima must be < X (empty m-ranges)");

    PrimeBlockDecomposition meta;
    meta.X = X;
    std::vector<LayerPrimes> lps;
    for (const PrimeInterval& iv : layers) {
        lps.push_back(build_layer(iv));
        meta.layers.push_back(lps.back().info);
    }

    u64 m_max = static_cast<u64>((2 * static_cast<u128>(X)) / min_prod);
    std::vector<i8> lam = lambda_array(1, m_max);

    std::unordered_map<u64, i64> acc;
    acc.reserve(4096);

    // Depth-first over (block, prime) choices, one per layer.
    auto recurse = [&](auto&& self, std::size_t layer, u128 prod_lo, u128 prod_hi,
                       u64 pp, int sign) -> void {
        if (layer == lps.size()) {
            if (prod_lo > 2 * static_cast<u128>(X)) return;
            u64 m_lo = prod_hi >= X ? 1
                                    : ceil_div(X, static_cast<u64>(prod_hi));
            u64 m_hi = static_cast<u64>((2 * static_cast<u128>(X)) / prod_lo);
            if (m_lo > m_hi) return;
            if (static_cast<u128>(pp) * m_hi > UINT64_MAX)
                fail_arg("decomposition coefficient index overflows 64 bits");
            for (u64 m = m_lo; m <= m_hi; ++m)
                acc[pp * m] += sign * static_cast<i64>(lam[m - 1]);
            return;
        }
        const LayerPrimes& lp = lps[layer];
        for (std::size_t b = 0; b < lp.info.blocks.size(); ++b) {
            const DyadicBlock& blk = lp.info.blocks[b];
            if (lp.block_primes[b].empty()) continue;
            u128 nlo = prod_lo * blk.nominal_lo;
            u128 nhi = prod_hi * blk.nominal_hi;
            if (nlo > 2 * static_cast<u128>(X)) continue;  // m-range empty
            for (u64 p : lp.block_primes[b])
                self(self, layer + 1, nlo, nhi, pp * p, -sign);
        }
    };
    recurse(recurse, 0, 1, 1, 1, 1);

    DirichletPolynomial poly;
    poly.provenance = "decomposition product";
    if (!acc.empty()) {
        u64 lo = UINT64_MAX, hi = 0;
        for (const auto& [n, v] : acc) {
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
        if (hi - lo + 1 > (u64(1) << 26))
            fail_arg("decomposition support too large to materialize densely");
        poly.support_lo = lo;
        poly.support_hi = hi;
        poly.coeffs.assign(hi - lo + 1, {0.0, 0.0});
        for (const auto& [n, v] : acc)
            poly.coeffs[n - lo] = {static_cast<double>(v), 0.0};
    }
    return {std::move(meta), std::move(poly)};
}

u64 decomposition_mismatches(const DirichletPolynomial& poly,
                             const std::vector<PrimeInterval>& layers, u64 X) {
    if (X < 2) fail_arg("decomposition_mismatches requires X >= 2");
    u64 len = X + 1;  // n in [X, 2X]
    std::vector<i8> lam = lambda_array(X, 2 * X);
    std::vector<std::vector<u16>> omega(layers.size(),
                                        std::vector<u16>(len, 0));
    for (std::size_t l = 0; l < layers.size(); ++l) {
        PrimeList pl = primes_in(layers[l].lo, std::min(layers[l].hi, 2 * X));
        for (u64 p : pl.primes) {
            u64 m0 = ceil_div(X, p) * p;
            for (u64 m = m0; m <= 2 * X; m += p) ++omega[l][m - X];
        }
    }
    u64 bad = 0;
    for (u64 n = X; n <= 2 * X; ++n) {
        i64 expect = lam[n - X];
        for (std::size_t l = 0; l < layers.size(); ++l)
            expect *= static_cast<i64>(omega[l][n - X]);
        std::complex<double> got = poly.at(n);
        if (got.imag() != 0.0 ||
            got.real() != static_cast<double>(expect))
            ++bad;
    }
    return bad;
}

// ---- Turan variance ----------------------------------------------------------------

TuranResult turan_variance(const PrimeInterval& layer, u64 X) {
    if (X < 2) fail_arg("turan_variance requires X >= 2");
    TuranResult out;
    if (layer.lo > layer.hi) return out;  // empty layer: all zeros
    if (layer.hi >= X) fail_arg("turan_variance requires layer max < X");

    PrimeList pl = primes_in(layer.lo, layer.hi);
    if (pl.primes.empty()) return out;
    for (u64 p : pl.primes) out.W += 1.0 / static_cast<double>(p);

    std::vector<u16> cnt(X + 1, 0);  // omega_P(n), n in [X, 2X]
    for (u64 p : pl.primes) {
        u64 m0 = ceil_div(X, p) * p;
        for (u64 m = m0; m <= 2 * X; m += p) ++cnt[m - X];
    }
    u64 s1 = 0, s2 = 0;
    for (u64 i = 0; i <= X; ++i) {
        s1 += cnt[i];
        s2 += static_cast<u64>(cnt[i]) * cnt[i];
    }
    double W = out.W;
    out.variance = static_cast<double>(s2) - 2.0 * W * static_cast<double>(s1) +
                   static_cast<double>(X + 1) * W * W;
    out.ratio = out.variance / (static_cast<double>(X) * W);
    return out;
}

// ---- restricted factorization --------------------------------------------------------

RestrictedFactorizationReport restricted_factorization_error(
    const PrimeInterval& layer, u64 X) {
    if (X < 2) fail_arg("restricted_factorization_error requires X >= 2");
    RestrictedFactorizationReport out;
    u64 eff_hi = std::min(layer.hi, 2 * X);  // primes above 2X divide nothing here
    if (layer.lo > eff_hi) {
        out.support_description = "no layer primes <= 2X: no discrepancy";
        return out;
    }
    PrimeList pl = primes_in(layer.lo, eff_hi);

    // m-side tables on [1, X] and n-side tables on [X, 2X].
    std::vector<i8> lam_m = lambda_array(1, X);
    std::vector<u16> om_m(X + 1, 0);  // omega_P(m), m in [1, X]
    for (u64 p : pl.primes) {
        if (p > X) break;
        for (u64 m = p; m <= X; m += p) ++om_m[m];
    }
    std::vector<i8> lam_n = lambda_array(X, 2 * X);
    std::vector<u16> om_n(X + 1, 0);
    std::vector<u8> has_sq(X + 1, 0);  // some layer p with p^2 | n
    for (u64 p : pl.primes) {
        u64 m0 = ceil_div(X, p) * p;
        for (u64 m = m0; m <= 2 * X; m += p) ++om_n[m - X];
        u128 p2 = static_cast<u128>(p) * p;
        if (p2 <= 2 * X) {
            u64 q = static_cast<u64>(p2);
            for (u64 m = ceil_div(X, q) * q; m <= 2 * X; m += q)
                has_sq[m - X] = 1;
        }
    }

    std::vector<double> b(X + 1, 0.0);
    for (u64 p : pl.primes) {
        u64 m_lo = ceil_div(X, p), m_hi = (2 * X) / p;
        for (u64 m = m_lo; m <= m_hi; ++m)
            b[p * m - X] -= static_cast<double>(lam_m[m - 1]) /
                            static_cast<double>(om_m[m] + 1);
    }

    constexpr double kSupportTol = 1e-9;  // above fp noise, below 1/(w+1) gaps
    for (u64 n = X; n <= 2 * X; ++n) {
        u64 i = n - X;
        double a = om_n[i] > 0 ? static_cast<double>(lam_n[i]) : 0.0;
        double d = a - b[i];
        double ad = std::fabs(d);
        out.sum_abs_error += ad;
        out.sum_abs_exact += std::fabs(a);
        if (ad > out.max_abs_error) {
            out.max_abs_error = ad;
            out.argmax_n = n;
        }
        if (ad > kSupportTol) {
            ++out.error_support_count;
            if (!has_sq[i]) out.support_on_squares = false;
        }
    }
    out.error_ratio = out.sum_abs_exact > 0.0
                          ? out.sum_abs_error / out.sum_abs_exact
                          : 0.0;
    out.support_description =
        std::to_string(out.error_support_count) + " error points; " +
        (out.support_on_squares
             ? "all divisible by p^2 for some layer prime"
             : "SOME OUTSIDE the p^2-divisible set");
    return out;
}

} // namespace liouville::dirichlet
