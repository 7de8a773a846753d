#include "liouville/multfunc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "liouville/parallel.hpp"
#include "liouville/sieve.hpp"

namespace liouville::multfunc {

namespace {

constexpr u64 kTabulateBudget = u64(1) << 25;  // factoring pass, budget halved
constexpr u64 kChunk = u64(1) << 22;

void check_bounded(double v, u64 p, u32 k) {
    if (std::fabs(v) > 1.0 + 1e-12) {
        (void)p;
        (void)k;
        fail_arg("multiplicative spec violates |f(p^k)| <= 1");
    }
}

} // namespace

double MultiplicativeFunctionSpec::prime_value(u64 p) const {
    double v;
    switch (prime_rule) {
        case PrimeRule::minus_one: v = -1.0; break;
        case PrimeRule::plus_one: v = 1.0; break;
        case PrimeRule::smooth_indicator:
            v = static_cast<double>(p) <= smooth_bound ? 1.0 : 0.0;
            break;
        case PrimeRule::table: {
            auto it = prime_table.find(p);
            if (it == prime_table.end())
                fail_arg("prime rule missing for a needed prime");
            v = it->second;
            break;
        }
        default: fail_arg("bad prime rule");
    }
    check_bounded(v, p, 1);
    return v;
}

double MultiplicativeFunctionSpec::prime_power_value(u64 p, u32 k) const {
    if (k == 0) return 1.0;
    if (k == 1) return prime_value(p);
    if (kind == Kind::completely_multiplicative) {
        double f = prime_value(p);
        double v = 1.0;
        for (u32 i = 0; i < k; ++i) v *= f;
        check_bounded(v, p, k);
        return v;
    }
    if (zero_at_higher) return 0.0;
    auto it = power_table.find((p << 6) | k);
    if (it == power_table.end())
        fail_arg("prime_power_rule missing for a needed p^k");
    check_bounded(it->second, p, k);
    return it->second;
}

MultiplicativeFunctionSpec MultiplicativeFunctionSpec::builtin(
    const std::string& name) {
    MultiplicativeFunctionSpec s;
    s.name = name;
    if (name == "lambda") {
        s.kind = Kind::completely_multiplicative;
        s.prime_rule = PrimeRule::minus_one;
    } else if (name == "one") {
        s.kind = Kind::completely_multiplicative;
        s.prime_rule = PrimeRule::plus_one;
    } else if (name == "mu") {
        s.kind = Kind::multiplicative;
        s.prime_rule = PrimeRule::minus_one;
        s.zero_at_higher = true;
    } else if (name == "mu2") {
        s.kind = Kind::multiplicative;
        s.prime_rule = PrimeRule::plus_one;
        s.zero_at_higher = true;
    } else if (name.rfind("smooth:", 0) == 0) {
        s.kind = Kind::completely_multiplicative;
        s.prime_rule = PrimeRule::smooth_indicator;
        try {
            s.smooth_bound = std::stod(name.substr(7));
        } catch (const std::exception&) {
            fail_arg("smooth:Y builtin needs a numeric bound");
        }
        if (!(s.smooth_bound >= 2.0)) fail_arg("smooth bound must be >= 2");
    } else {
        fail_arg("unknown builtin (expected lambda|mu|mu2|one|smooth:Y)");
    }
    return s;
}

MultiplicativeFunctionSpec MultiplicativeFunctionSpec::from_json_text(
    const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail_arg(std::string("spec JSON parse error: ") + e.what());
    }
    if (!j.contains("kind")) fail_arg("spec JSON needs a \"kind\" field");
    std::string kind = j["kind"].get<std::string>();

    if (j.contains("rule")) {
        MultiplicativeFunctionSpec s = builtin(j["rule"].get<std::string>());
        // kind may override (e.g. a multiplicative surrogate of a named rule);
        // higher powers then need an explicit table.
        if (kind == "multiplicative" &&
            s.kind == Kind::completely_multiplicative) {
            s.kind = Kind::multiplicative;
            s.zero_at_higher = false;
        } else if (kind == "completely_multiplicative" &&
                   s.kind == Kind::multiplicative) {
            fail_arg("builtin rule is not completely multiplicative");
        }
        if (j.contains("prime_powers")) {
            for (const auto& row : j["prime_powers"]) {
                u64 p = row.at(0).get<u64>();
                u32 k = row.at(1).get<u32>();
                s.power_table[(p << 6) | k] = row.at(2).get<double>();
            }
            s.zero_at_higher = false;
        }
        return s;
    }

    MultiplicativeFunctionSpec s;
    s.name = "custom";
    if (kind == "completely_multiplicative") {
        s.kind = Kind::completely_multiplicative;
    } else if (kind == "multiplicative") {
        s.kind = Kind::multiplicative;
    } else {
        fail_arg("spec kind must be completely_multiplicative or multiplicative");
    }
    if (!j.contains("primes")) fail_arg("spec JSON needs \"primes\" or \"rule\"");
    s.prime_rule = PrimeRule::table;
    for (const auto& row : j["primes"]) {
        u64 p = row.at(0).get<u64>();
        s.prime_table[p] = row.at(1).get<double>();
    }
    if (j.contains("prime_powers")) {
        for (const auto& row : j["prime_powers"]) {
            u64 p = row.at(0).get<u64>();
            u32 k = row.at(1).get<u32>();
            s.power_table[(p << 6) | k] = row.at(2).get<double>();
        }
    }
    return s;
}

MultiplicativeFunctionSpec MultiplicativeFunctionSpec::from_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_arg("cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

// ---- tabulation ---------------------------------------------------------------

std::vector<double> tabulate(const MultiplicativeFunctionSpec& spec, u64 lo,
                             u64 hi) {
    if (lo < 1 || lo > hi) fail_arg("tabulate range invalid");
    if (hi - lo + 1 > kTabulateBudget)
        fail_arg("tabulate range exceeds the factoring budget");
    std::vector<double> vals(hi - lo + 1, 1.0);
    factor_scan(
        lo, hi,
        [&](u64 i, u64 p, u32 e) { vals[i] *= spec.prime_power_value(p, e); },
        [&](u64 i, u64 q) { vals[i] *= spec.prime_value(q); });
    return vals;
}

// ---- pretentious distance -------------------------------------------------------

double pretentious_distance(const MultiplicativeFunctionSpec& spec, u64 X) {
    if (X < 2) fail_arg("pretentious_distance requires X >= 2");
    double acc = 0.0;
    for (u64 lo = 1; lo <= X; lo += kChunk) {
        u64 hi = std::min(X, lo + kChunk - 1);
        PrimeList pl = primes_in(lo, hi);
        for (u64 p : pl.primes)
            acc += (1.0 - spec.prime_value(p)) / static_cast<double>(p);
    }
    return acc;
}

// ---- Wirsing report -------------------------------------------------------------

WirsingReport wirsing_mean(const MultiplicativeFunctionSpec& spec, u64 N,
                           u64 prime_cutoff, unsigned threads) {
    if (N < 1) fail_arg("wirsing_mean requires N >= 1");
    if (prime_cutoff < 2) fail_arg("wirsing_mean requires cutoff >= 2");
    WirsingReport rep;
    rep.N = N;
    rep.cutoff = prime_cutoff;

    // Partial product over p <= cutoff with the telescoping (1-1/p) weight.
    // Completely multiplicative specs use the closed geometric form, so f == 1
    // gives exactly 1. Otherwise the series is truncated at 1/p^k < 1e-15.
    double prod = 1.0, dist = 0.0;
    for (u64 lo = 1; lo <= prime_cutoff; lo += kChunk) {
        u64 hi = std::min(prime_cutoff, lo + kChunk - 1);
        PrimeList pl = primes_in(lo, hi);
        for (u64 p : pl.primes) {
            double pd = static_cast<double>(p);
            double fp = spec.prime_value(p);
            double factor;
            if (spec.kind ==
                MultiplicativeFunctionSpec::Kind::completely_multiplicative) {
                factor = (1.0 - 1.0 / pd) / (1.0 - fp / pd);
            } else {
                double series = 1.0, pk = pd;
                for (u32 k = 1;; ++k) {
                    series += spec.prime_power_value(p, k) / pk;
                    if (1.0 / pk < 1e-15) break;
                    pk *= pd;
                }
                factor = (1.0 - 1.0 / pd) * series;
            }
            prod *= factor;
            dist += (1.0 - fp) / pd;
        }
    }
    rep.partial_product = prod;
    rep.distance = dist;

    unsigned nt = resolve_threads(threads);
    u64 nchunks = ceil_div(N, kChunk);
    std::vector<double> sum_parts(nchunks, 0.0), abs_parts(nchunks, 0.0);
    run_chunks(nchunks, nt, [&](u64 c) {
        u64 lo = 1 + c * kChunk, hi = std::min(N, lo + kChunk - 1);
        std::vector<double> vals = tabulate(spec, lo, hi);
        double s = 0.0, a = 0.0;
        for (double v : vals) {
            s += v;
            a += std::fabs(v);
        }
        sum_parts[c] = s;
        abs_parts[c] = a;
    });
    double s = 0.0, a = 0.0;
    for (u64 c = 0; c < nchunks; ++c) {
        s += sum_parts[c];
        a += abs_parts[c];
    }
    rep.empirical_mean = s / static_cast<double>(N);
    rep.alpha = a / static_cast<double>(N);
    rep.beta = rep.empirical_mean;
    return rep;
}

// ---- short vs long averages -------------------------------------------------------

ShortLongReport short_vs_long(const MultiplicativeFunctionSpec& spec, u64 X,
                              u64 h, u64 step, double eps, unsigned threads) {
    if (h < 1 || X < h) fail_arg("short_vs_long requires X >= h >= 1");
    if (step < 1) fail_arg("short_vs_long requires step >= 1");
    ShortLongReport rep;
    rep.X = X;
    rep.h = h;
    rep.step = step;
    rep.eps = eps;
    rep.count = (X + step - 1) / step;

    // f on [X, 2X + h - 1]: windows (x, x+h] for x in [X, 2X) plus the long
    // average over [X, 2X].
    const u64 lo = X, hi = 2 * X + h - 1;
    std::vector<double> vals(hi - lo + 1);
    unsigned nt = resolve_threads(threads);
    run_range_chunks(lo, hi, kChunk, nt, [&](u64, u64 clo, u64 chi) {
        std::vector<double> v = tabulate(spec, clo, chi);
        std::copy(v.begin(), v.end(), vals.begin() + (clo - lo));
    });

    std::vector<double> prefix(vals.size() + 1, 0.0);
    for (std::size_t i = 0; i < vals.size(); ++i)
        prefix[i + 1] = prefix[i] + vals[i];

    // sum over [X, 2X] = prefix[(2X)-lo+1]
    double long_sum = prefix[X + 1];
    rep.long_average = long_sum / static_cast<double>(X);
    double target = static_cast<double>(h) * rep.long_average;
    double cut = eps * static_cast<double>(h);

    std::vector<double> devs;
    devs.reserve(rep.count);
    for (u64 j = 0; j < X; j += step) {
        // S(x,h) with x = X + j: values (x, x+h] are vals[j+1 .. j+h]
        double S = prefix[j + h + 1] - prefix[j + 1];
        devs.push_back(std::fabs(S - target));
    }
    for (double d : devs)
        if (d > cut) ++rep.exceptional_count;
    rep.exceptional_fraction =
        static_cast<double>(rep.exceptional_count) / static_cast<double>(rep.count);

    std::vector<double> sorted = devs;
    std::sort(sorted.begin(), sorted.end());
    auto q = [&](double frac) {
        std::size_t i = static_cast<std::size_t>(frac * (sorted.size() - 1));
        return sorted[i];
    };
    rep.dev_min = sorted.front();
    rep.dev_p25 = q(0.25);
    rep.dev_p50 = q(0.50);
    rep.dev_p75 = q(0.75);
    rep.dev_p90 = q(0.90);
    rep.dev_p99 = q(0.99);
    rep.dev_max = sorted.back();
    return rep;
}

// ---- sign changes -----------------------------------------------------------------

SignChangeReport sign_changes(const MultiplicativeFunctionSpec& spec, u64 N,
                              unsigned threads) {
    if (N < 2) fail_arg("sign_changes requires N >= 2");
    (void)threads;  // sequential stream: boundary sign carries across chunks
    SignChangeReport rep;
    rep.N = N;
    int last_sign = 0;
    for (u64 lo = 1; lo <= N; lo += kChunk) {
        u64 hi = std::min(N, lo + kChunk - 1);
        std::vector<double> vals = tabulate(spec, lo, hi);
        for (double v : vals) {
            if (v == 0.0) continue;
            int s = v > 0.0 ? 1 : -1;
            ++rep.nonzero_count;
            if (last_sign != 0 && s != last_sign) ++rep.count;
            last_sign = s;
        }
    }
    rep.all_zero = rep.nonzero_count == 0;
    rep.proportion = static_cast<double>(rep.count) / static_cast<double>(N);
    return rep;
}

// ---- smooth numbers in short intervals ----------------------------------------------

SmoothWitness smooth_in_interval(u64 N, double eps_exponent, double C) {
    if (N < 4) fail_arg("smooth_in_interval requires N >= 4");
    if (!(eps_exponent > 0.0) || !(eps_exponent < 1.0))
        fail_arg("smooth_in_interval requires 0 < eps_exponent < 1");
    if (!(C >= 0.0)) fail_arg("smooth_in_interval requires C >= 0");

    SmoothWitness w;
    w.bound = std::pow(static_cast<double>(N), eps_exponent);
    w.scan_hi =
        N + static_cast<u64>(std::floor(C * std::sqrt(static_cast<double>(N))));

    constexpr u64 kBlock = 4096;
    SieveOptions opt;
    opt.with_lpf = true;
    for (u64 lo = N; lo <= w.scan_hi; lo += kBlock) {
        u64 hi = std::min(w.scan_hi, lo + kBlock - 1);
        FactorTable t = sieve_segment(lo, hi, opt);
        for (u64 n = lo; n <= hi; ++n) {
            if (static_cast<double>(t.lpf(n)) <= w.bound) {
                w.found = true;
                w.witness = n;
                w.offset = n - N;
                return w;
            }
        }
    }
    return w;
}

} // namespace liouville::multfunc
