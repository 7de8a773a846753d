// Dirichlet polynomials: evaluation, Plancherel-type identity checks,
// mean-value and large-value statistics, twisted sums, and the layered
// prime-block coefficient decomposition with its exactness diagnostics.
#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "liouville/common.hpp"

namespace liouville::dirichlet {

struct DirichletPolynomial {
    u64 support_lo = 1;
    u64 support_hi = 0;  // hi < lo encodes the zero polynomial
    std::vector<std::complex<double>> coeffs;  // coeffs[n - support_lo]
    std::string provenance = "raw";  // raw | prime-restricted | decomposition product

    bool is_zero() const { return support_hi < support_lo || coeffs.empty(); }
    std::complex<double> at(u64 n) const {
        if (n < support_lo || n > support_hi) return {0.0, 0.0};
        return coeffs[n - support_lo];
    }
};

// Packed nonzero support for repeated evaluation.
struct PackedPoly {
    std::vector<double> logn, re, im;
    std::vector<u64> n;  // the support points, ascending
    double sum_abs = 0.0, sum_abs2 = 0.0;
    u64 n_min = 0, n_max = 0;  // nonzero support bounds (0 when empty)

    static PackedPoly pack(const DirichletPolynomial& poly);
    std::size_t nnz() const { return logn.size(); }
    std::complex<double> eval(double y) const;
    double abs2(double y) const;
};

// A(y) = sum a(n) n^{iy}, compensated summation.
std::complex<double> evaluate(const DirichletPolynomial& poly, double y);

// ---- standard coefficient builders --------------------------------------------

// a(n) = lambda(n) on [lo, hi].
DirichletPolynomial lambda_poly(u64 lo, u64 hi);

// a(n) = exp(2 pi i u_n) for n in [1, N], u_n drawn from (seed, stream, n).
DirichletPolynomial random_unit_poly(u64 N, u64 seed, u64 stream);

// a(p) = 1 on primes p <= P, zero elsewhere; provenance "prime-restricted".
DirichletPolynomial prime_ones_poly(u64 P);

struct QuadratureParams {
    double step_hint = 0.0;   // 0 => auto: min(1/(8 log n_max), span/5000)
    double y_max_hint = 0.0;  // 0 => auto per operation
    bool richardson = true;
};

struct PlancherelResult {
    double lhs = 0.0;      // exact piecewise integral
    double rhs = 0.0;      // exact diagonal + quadrature of the cross part
    double rel_err = 0.0;  // |lhs-rhs| / max(lhs, tiny)
    double y_max = 0.0, step = 0.0;
    double tail_bound = 0.0;  // worst-case truncation bound on the cross part
    u64 grid_points = 0;
    bool quad_ok = true;  // coarse vs refined quadrature agreed to 1e-3
};

PlancherelResult plancherel_check(const DirichletPolynomial& poly, double T,
                                  const QuadratureParams& quad = {});

struct SaffariVaughanResult {
    double lhs = 0.0;           // exact short-interval integral
    double rhs_integral = 0.0;  // quadrature of |A|^2 min(h^2/(c1 X)^2, 1/y^2)
    double denom = 0.0;         // (c2^2/c1) X rhs_integral
    double ratio = 0.0;         // empirical implied constant; 0 for zero poly
};

SaffariVaughanResult saffari_vaughan_ratio(const DirichletPolynomial& poly,
                                           double h, double X, double c1,
                                           double c2,
                                           const QuadratureParams& quad = {});

struct MeanValueResult {
    double integral = 0.0;  // int_{-T}^{T} |A(t)|^2 dt by quadrature
    double denom = 0.0;     // (T + N) sum |a(n)|^2
    double ratio = 0.0;
    u64 grid_points = 0;
    bool quad_ok = true;
};

MeanValueResult mean_value_ratio(const DirichletPolynomial& poly, double T,
                                 const QuadratureParams& quad = {});

struct ExceptionalSet {
    double T = 0.0;
    double grid_step = 0.0;
    std::vector<double> member_points;  // ascending grid frequencies
    double measure_estimate = 0.0;      // min(grid_step * count, 2T)
};

struct LargeValuesResult {
    ExceptionalSet set;
    double threshold = 0.0;  // pi(P)/V
    double bound = 0.0;      // (V^2 log T)^(1 + log T/log P)
    u64 pi_p = 0;
};

// Grid-sampled set of |t| <= T where |A(t)| >= pi(P)/V. Coefficients must be
// supported on primes <= P with |a(p)| <= 1; grid_step <= 1/(4 log P).
LargeValuesResult large_values_measure(const DirichletPolynomial& prime_poly,
                                       u64 P, double T, double V,
                                       double grid_step);

struct HalaszMontgomeryResult {
    double integral = 0.0;  // grid-weighted int over E of |A(t)|^2
    double denom = 0.0;
    double ratio = 0.0;
};

// prime_variant=false: denom = (N + |E| sqrt(T) log T) sum|a|^2.
// prime_variant=true:  denom = (P/log P + |E| P exp(-log P/(log(T+P))^{2/3+eps}))
//                      sum|a|^2 with prime support.
HalaszMontgomeryResult halasz_montgomery_ratio(const DirichletPolynomial& poly,
                                               const ExceptionalSet& E, double T,
                                               bool prime_variant,
                                               double eps = 0.1);

enum class TwistKind { liouville, primes };

TwistKind parse_twist_kind(const std::string& s);

struct TwistPoint {
    double t = 0.0;
    double abs_sum = 0.0;
    double trivial_bound = 0.0;  // x for lambda twists, pi(x) for prime twists
    double ratio = 0.0;
};

std::vector<TwistPoint> twisted_sum_profile(TwistKind kind, u64 x,
                                            const std::vector<double>& t_values,
                                            unsigned threads = 0);

// ---- layered prime-block decomposition ---------------------------------------

struct PrimeInterval {
    u64 lo = 0, hi = 0;  // inclusive; lo > hi encodes an empty layer
};

struct DyadicBlock {
    u64 nominal_lo = 0, nominal_hi = 0;  // [2^j P0, 2^{j+1} P0), used in m-ranges
    u64 lo = 0, hi = 0;                  // clipped to the layer (inclusive)
    u64 prime_count = 0;
};

struct LayerInfo {
    PrimeInterval interval;
    std::vector<DyadicBlock> blocks;
    double W = 0.0;  // sum of 1/p over the layer's primes
    u64 prime_count = 0;
};

struct PrimeBlockDecomposition {
    std::vector<LayerInfo> layers;
    u64 X = 0;
};

// Materializes a(n) = sum over (p_1..p_r, m) tuples with one prime per layer,
// p_l in dyadic block B_l, and ceil(X/prod hi(B_l)) <= m <= floor(2X/prod
// lo(B_l)); each term contributes (-1)^r lambda(m). On [X, 2X] this equals
// lambda(n) * prod_l omega_layer(n) exactly.
std::pair<PrimeBlockDecomposition, DirichletPolynomial> build_decomposition(
    const std::vector<PrimeInterval>& layers, u64 X);

// Number of n in [X, 2X] where poly.at(n) != lambda(n) * prod omega_layer(n).
u64 decomposition_mismatches(const DirichletPolynomial& poly,
                             const std::vector<PrimeInterval>& layers, u64 X);

struct TuranResult {
    double variance = 0.0;  // sum over [X,2X] of (omega_P(n) - W)^2
    double W = 0.0;
    double ratio = 0.0;  // variance / (X W); 0 when W = 0
};

TuranResult turan_variance(const PrimeInterval& layer, u64 X);

struct RestrictedFactorizationReport {
    double max_abs_error = 0.0;
    u64 argmax_n = 0;
    double sum_abs_error = 0.0;
    double sum_abs_exact = 0.0;
    double error_ratio = 0.0;        // sum_abs_error / sum_abs_exact
    bool support_on_squares = true;  // all errors at n with p^2 | n, p in layer
    u64 error_support_count = 0;
    std::string support_description;
};

// Compares a(n) = lambda(n) 1[n has a layer-prime factor] against the
// omega+1-weighted convolution sum_{p | n, p in layer} lambda(p)
// lambda(n/p)/(omega_P(n/p)+1) for n in [X, 2X].
RestrictedFactorizationReport restricted_factorization_error(
    const PrimeInterval& layer, u64 X);

} // namespace liouville::dirichlet
