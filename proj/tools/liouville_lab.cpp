// liouville-lab: unified CLI over the sieve / short-interval / correlation /
// Dirichlet-polynomial / multiplicative-function modules. Deterministic
// CSV/JSON emission (12 significant digits) and golden snapshot management.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liouville/chowla.hpp"
#include "liouville/common.hpp"
#include "liouville/dirichlet.hpp"
#include "liouville/emit.hpp"
#include "liouville/intervals.hpp"
#include "liouville/kernels.hpp"
#include "liouville/multfunc.hpp"
#include "liouville/rng.hpp"
#include "liouville/sieve.hpp"

using namespace liouville;
using emit::ordered_json;

namespace {

// ---- option plumbing ------------------------------------------------------------

struct GlobalOpts {
    u64 seed = 0;
    unsigned threads = 0;  // 0 = auto
    std::string format;    // empty = per-command default
    std::string output;    // empty = stdout
    std::string golden_dir;
    std::string golden_name;
    std::string simd = "auto";
};

struct CommandOut {
    ordered_json params = ordered_json::object();
    ordered_json results = ordered_json::object();
    const char* default_format = "json";
    std::string csv;  // empty => generic key,value fallback
};

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

u64 parse_u64(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
        u64 v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        fail_arg(std::string(what) + ": bad integer '" + s + "'");
    }
}

double parse_f64(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        fail_arg(std::string(what) + ": bad number '" + s + "'");
    }
}

std::vector<u64> parse_u64_list(const std::string& s, const char* what) {
    std::vector<u64> out;
    for (const std::string& tok : split_list(s, ','))
        out.push_back(parse_u64(tok, what));
    return out;
}

std::vector<double> parse_f64_list(const std::string& s, const char* what) {
    std::vector<double> out;
    if (s.empty()) return out;
    for (const std::string& tok : split_list(s, ','))
        out.push_back(parse_f64(tok, what));
    return out;
}

std::vector<dirichlet::PrimeInterval> parse_layers(const std::string& s) {
    std::vector<dirichlet::PrimeInterval> out;
    for (const std::string& part : split_list(s, ';')) {
        auto bounds = split_list(part, ':');
        if (bounds.size() != 2)
            fail_arg("layer '" + part + "' must look like lo:hi");
        out.push_back({parse_u64(bounds[0], "layer lo"),
                       parse_u64(bounds[1], "layer hi")});
    }
    return out;
}

// Coefficient file: CSV rows `n,re[,im]`; '#' comments and a header line are
// skipped.
dirichlet::DirichletPolynomial load_coeffs(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_arg("cannot open coefficient file: " + path);
    std::map<u64, std::complex<double>> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_list(line, ',');
        if (cells.size() < 2) fail_arg("coefficient row needs n,re[,im]");
        u64 n;
        try {
            std::size_t pos = 0;
            n = std::stoull(cells[0], &pos);
            if (pos != cells[0].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            continue;  // header line
        }
        if (n < 1) fail_arg("coefficient index must be >= 1");
        double re = parse_f64(cells[1], "coefficient re");
        double im = cells.size() > 2 ? parse_f64(cells[2], "coefficient im") : 0.0;
        entries[n] = {re, im};
    }
    if (entries.empty()) fail_arg("coefficient file has no rows");
    u64 lo = entries.begin()->first, hi = entries.rbegin()->first;
    if (hi - lo + 1 > (u64(1) << 26)) fail_arg("coefficient support too wide");
    dirichlet::DirichletPolynomial poly;
    poly.support_lo = lo;
    poly.support_hi = hi;
    poly.coeffs.assign(hi - lo + 1, {0.0, 0.0});
    for (const auto& [n, c] : entries) poly.coeffs[n - lo] = c;
    return poly;
}

multfunc::MultiplicativeFunctionSpec load_spec(const std::string& f) {
    if (f == "lambda" || f == "mu" || f == "mu2" || f == "one" ||
        f.rfind("smooth:", 0) == 0)
        return multfunc::MultiplicativeFunctionSpec::builtin(f);
    return multfunc::MultiplicativeFunctionSpec::from_file(f);
}

std::string kv_csv(const ordered_json& j) {
    std::string out = "key,value\n";
    std::function<void(const ordered_json&, const std::string&)> walk =
        [&](const ordered_json& node, const std::string& path) {
            if (node.is_object()) {
                for (auto it = node.begin(); it != node.end(); ++it)
                    walk(it.value(), path.empty() ? it.key() : path + "." + it.key());
            } else if (node.is_array()) {
                for (std::size_t i = 0; i < node.size(); ++i)
                    walk(node[i], path + "." + std::to_string(i));
            } else {
                std::string v = node.is_string() ? node.get<std::string>()
                                                 : node.dump();
                out += emit::csv_row({path, v});
            }
        };
    walk(j, "");
    return out;
}

void emit_output(const GlobalOpts& g, const std::string& cmd, CommandOut&& co) {
    ordered_json payload;
    payload["command"] = cmd;
    payload["seed"] = g.seed;
    payload["params"] = co.params;
    payload["results"] = co.results;
    emit::normalize_floats(payload);

    std::string fmt = g.format.empty() ? co.default_format : g.format;
    std::string body;
    if (fmt == "json") {
        body = payload.dump(2) + "\n";
    } else if (fmt == "csv") {
        body = co.csv.empty() ? kv_csv(payload) : co.csv;
    } else {
        fail_arg("unknown format (expected csv or json)");
    }

    if (!g.golden_name.empty()) {
        const char* env = std::getenv("LIOUVILLE_LAB_GOLDEN");
        std::string dir = (env && *env) ? env
                          : !g.golden_dir.empty() ? g.golden_dir
                                                  : "goldens";
        ordered_json key;
        key["command"] = cmd;
        key["seed"] = g.seed;
        key["params"] = payload["params"];
        emit::GoldenStore store(dir);
        emit::GoldenOutcome oc = store.record(g.golden_name, key, payload);
        std::fprintf(stderr, "golden '%s': %s (%s)\n", g.golden_name.c_str(),
                     oc.status == emit::GoldenStatus::written ? "written"
                                                              : "matched",
                     oc.path.c_str());
    }

    if (g.output.empty() || g.output == "-") {
        std::fwrite(body.data(), 1, body.size(), stdout);
    } else {
        std::ofstream f(g.output, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output path: " + g.output);
        f.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!f) throw std::runtime_error("failed writing output: " + g.output);
    }
}

// ---- subcommand handlers ----------------------------------------------------------

CommandOut run_sieve(u64 lo, u64 hi, bool with_lpf, const std::string& cache) {
    SieveOptions opt;
    opt.with_lpf = with_lpf;
    FactorTable t = sieve_segment(lo, hi, opt);
    u64 primes = 0, squarefree = 0, max_omega = 0;
    i64 lambda_sum = 0;
    for (u64 n = lo; n <= hi; ++n) {
        if (t.is_prime(n)) ++primes;
        if (t.is_squarefree(n)) ++squarefree;
        max_omega = std::max<u64>(max_omega, t.omega(n));
        lambda_sum += t.lambda(n);
    }
    CommandOut co;
    co.params = {{"lo", lo}, {"hi", hi}, {"lpf", with_lpf}};
    co.results = {{"lo", lo},
                  {"hi", hi},
                  {"count", hi - lo + 1},
                  {"prime_count", primes},
                  {"squarefree_count", squarefree},
                  {"lambda_sum", lambda_sum},
                  {"max_omega", max_omega}};
    if (!cache.empty()) {
        write_table_cache(t, cache);
        co.results["cache"] = cache;
    }
    return co;
}

CommandOut run_variance(const GlobalOpts& g, u64 x, u64 h, u64 step,
                        const std::string& weight_s,
                        const std::string& thresholds_s) {
    intervals::Weight w = intervals::parse_weight(weight_s);
    std::vector<double> thresholds =
        parse_f64_list(thresholds_s, "threshold");
    intervals::IntervalSumStats st =
        intervals::variance_scan(x, h, step, w, thresholds, g.threads);

    CommandOut co;
    co.default_format = "csv";
    co.params = {{"x", x},
                 {"h", h},
                 {"step", step},
                 {"weight", weight_s},
                 {"thresholds", thresholds}};
    ordered_json exc = ordered_json::array();
    for (const auto& [eps, cnt] : st.exceptional_counts)
        exc.push_back({{"threshold", eps}, {"count", cnt}});
    ordered_json hist = ordered_json::array();
    for (u64 b : st.histogram) hist.push_back(b);
    co.results = {{"x_start", st.x_start},
                  {"h", st.h},
                  {"step", st.step},
                  {"weight", weight_s},
                  {"count", st.count},
                  {"mean_sq", st.mean_sq},
                  {"normalized_variance", st.normalized_variance},
                  {"max_abs", st.max_abs},
                  {"exceptional", exc},
                  {"histogram", hist},
                  {"histogram_lo", intervals::kHistLo},
                  {"histogram_bin_width", intervals::kHistBinWidth}};

    std::vector<std::string> head = {"x_start",  "h",
                                     "count",    "mean_sq",
                                     "normalized_variance", "max_abs"};
    std::vector<std::string> row = {std::to_string(st.x_start),
                                    std::to_string(st.h),
                                    std::to_string(st.count),
                                    emit::fmt_g12(st.mean_sq),
                                    emit::fmt_g12(st.normalized_variance),
                                    emit::fmt_g12(st.max_abs)};
    for (const auto& [eps, cnt] : st.exceptional_counts) {
        head.push_back("exc_" + emit::fmt_g12(eps));
        row.push_back(std::to_string(cnt));
    }
    co.csv = emit::csv_row(head) + emit::csv_row(row);
    return co;
}

CommandOut run_patterns(const GlobalOpts& g, u64 n, int k) {
    chowla::PatternCensus pc = chowla::pattern_census(n, k, g.threads);
    CommandOut co;
    co.params = {{"n", n}, {"k", k}};
    ordered_json rows = ordered_json::array();
    std::string csv = "code,signs,count,frequency\n";
    for (std::size_t code = 0; code < pc.counts.size(); ++code) {
        std::string signs;
        for (int j = 0; j < k; ++j) signs += (code >> j) & 1 ? '-' : '+';
        rows.push_back({{"code", code},
                        {"signs", signs},
                        {"count", pc.counts[code]},
                        {"frequency", pc.frequencies[code]}});
        csv += emit::csv_row({std::to_string(code), signs,
                              std::to_string(pc.counts[code]),
                              emit::fmt_g12(pc.frequencies[code])});
    }
    co.results = {{"n", pc.N},
                  {"k", pc.k},
                  {"samples", pc.N - static_cast<u64>(pc.k) + 1},
                  {"patterns", rows}};
    co.csv = csv;
    return co;
}

CommandOut run_correlate(const GlobalOpts& g, u64 n, const std::string& shifts_s) {
    std::vector<u64> shifts;
    for (const std::string& tok : split_list(shifts_s, ',')) {
        if (!tok.empty() && tok[0] == '-')
            fail_arg("shifts must be >= 0 (apply a global translate first)");
        shifts.push_back(parse_u64(tok, "shift"));
    }
    chowla::CorrelationResult r = chowla::correlation(n, shifts, g.threads);
    CommandOut co;
    co.params = {{"n", n}, {"shifts", shifts}};
    co.results = {{"n", r.N},
                  {"shifts", r.shifts},
                  {"sum", r.sum},
                  {"normalized", r.normalized}};
    return co;
}

CommandOut run_avg_chowla(const GlobalOpts& g, u64 x, u64 h, int k) {
    double v = chowla::averaged_chowla(x, h, k, g.threads);
    CommandOut co;
    co.params = {{"x", x}, {"h", h}, {"k", k}};
    co.results = {{"x", x}, {"h", h}, {"k", k}, {"value", v}};
    return co;
}

CommandOut run_log_chowla(const GlobalOpts& g, u64 x, u64 shift) {
    double v = chowla::log_chowla(x, shift, g.threads);
    CommandOut co;
    co.params = {{"x", x}, {"shift", shift}};
    co.results = {{"x", x},
                  {"shift", shift},
                  {"value", v},
                  {"raw_sum", v * std::log(static_cast<double>(x))}};
    return co;
}

CommandOut run_discrepancy(const GlobalOpts& g, u64 n, const std::string& f) {
    chowla::DiscrepancyResult r;
    if (f == "lambda") {
        r = chowla::discrepancy_scan_lambda(n, g.threads);
    } else {
        multfunc::MultiplicativeFunctionSpec spec = load_spec(f);
        std::vector<double> vals;
        std::vector<i8> signs(n);
        for (u64 lo = 1; lo <= n; lo += (u64(1) << 22)) {
            u64 hi = std::min(n, lo + (u64(1) << 22) - 1);
            vals = multfunc::tabulate(spec, lo, hi);
            for (u64 i = 0; i < vals.size(); ++i) {
                double v = vals[i];
                if (v == 1.0) signs[lo - 1 + i] = 1;
                else if (v == -1.0) signs[lo - 1 + i] = -1;
                else if (v == 0.0)
                    fail_arg("zero value encountered in discrepancy scan");
                else
                    fail_arg("discrepancy scan needs +-1 values");
            }
        }
        r = chowla::discrepancy_scan(signs, n, g.threads);
    }
    CommandOut co;
    co.params = {{"n", n}, {"f", f}};
    co.results = {{"n", r.N},
                  {"f", f},
                  {"max_abs", r.max_abs},
                  {"argmax_d", r.argmax_d},
                  {"argmax_n", r.argmax_n}};
    return co;
}

dirichlet::DirichletPolynomial poly_from_flags(const std::string& coeffs,
                                               const std::string& lrange,
                                               u64 random_n, u64 seed) {
    int given = (!coeffs.empty()) + (!lrange.empty()) + (random_n > 0);
    if (given != 1)
        fail_arg("provide exactly one of --coeffs / --liouville-range / --random-n");
    if (!coeffs.empty()) return load_coeffs(coeffs);
    if (!lrange.empty()) {
        auto ab = parse_u64_list(lrange, "liouville range");
        if (ab.size() != 2) fail_arg("--liouville-range needs A,B");
        return dirichlet::lambda_poly(ab[0], ab[1]);
    }
    return dirichlet::random_unit_poly(random_n, seed, 1);
}

CommandOut run_plancherel(const GlobalOpts& g, const std::string& coeffs,
                          const std::string& lrange, u64 random_n, double T,
                          double y_max, double step) {
    dirichlet::DirichletPolynomial poly =
        poly_from_flags(coeffs, lrange, random_n, g.seed);
    dirichlet::QuadratureParams q;
    q.y_max_hint = y_max;
    q.step_hint = step;
    dirichlet::PlancherelResult r = dirichlet::plancherel_check(poly, T, q);
    CommandOut co;
    co.params = {{"coeffs", coeffs},
                 {"liouville_range", lrange},
                 {"random_n", random_n},
                 {"t", T}};
    co.results = {{"lhs", r.lhs},
                  {"rhs", r.rhs},
                  {"rel_err", r.rel_err},
                  {"y_max", r.y_max},
                  {"step", r.step},
                  {"grid_points", r.grid_points},
                  {"tail_bound", r.tail_bound},
                  {"quad_ok", r.quad_ok}};
    return co;
}

CommandOut run_meanvalue(const GlobalOpts& g, const std::string& coeffs,
                         const std::string& lrange, u64 random_n, double T) {
    dirichlet::DirichletPolynomial poly =
        poly_from_flags(coeffs, lrange, random_n, g.seed);
    dirichlet::MeanValueResult r = dirichlet::mean_value_ratio(poly, T);
    CommandOut co;
    co.params = {{"coeffs", coeffs},
                 {"liouville_range", lrange},
                 {"random_n", random_n},
                 {"t", T}};
    co.results = {{"lhs", r.integral},
                  {"rhs", r.denom},
                  {"integral", r.integral},
                  {"denom", r.denom},
                  {"ratio", r.ratio},
                  {"grid_points", r.grid_points},
                  {"quad_ok", r.quad_ok}};
    return co;
}

CommandOut run_large_values(const std::string& coeffs, u64 P, double T, double V,
                            double step, bool emit_points) {
    dirichlet::DirichletPolynomial poly =
        coeffs.empty() ? dirichlet::prime_ones_poly(P) : load_coeffs(coeffs);
    dirichlet::LargeValuesResult r =
        dirichlet::large_values_measure(poly, P, T, V, step);
    CommandOut co;
    co.params = {{"coeffs", coeffs},
                 {"p", P},
                 {"t", T},
                 {"v", V},
                 {"step", step}};
    co.results = {{"pi_p", r.pi_p},
                  {"threshold", r.threshold},
                  {"member_count", r.set.member_points.size()},
                  {"lhs", r.set.measure_estimate},
                  {"rhs", r.bound},
                  {"measure_estimate", r.set.measure_estimate},
                  {"bound", r.bound},
                  {"grid_step", r.set.grid_step}};
    if (emit_points) co.results["member_points"] = r.set.member_points;
    return co;
}

CommandOut run_hm_ratio(const GlobalOpts& g, u64 random_n, u64 prime_p, double T,
                        u64 e_count, double e_step) {
    bool prime_variant = prime_p > 0;
    if ((random_n > 0) == prime_variant)
        fail_arg("provide exactly one of --random-n / --prime-p");
    dirichlet::DirichletPolynomial poly =
        prime_variant ? dirichlet::prime_ones_poly(prime_p)
                      : dirichlet::random_unit_poly(random_n, g.seed, 1);

    // E = e_count distinct grid cells drawn from (seed, stream 2).
    u64 npts = static_cast<u64>(std::floor(2.0 * T / e_step)) + 1;
    if (e_count > npts) fail_arg("--e-count exceeds the grid size");
    CounterRng rng(g.seed);
    std::vector<u64> idx;
    for (u64 c = 0; idx.size() < e_count; ++c) {
        u64 i = rng.uniform_u64(2, c, 0, npts - 1);
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end());
    dirichlet::ExceptionalSet E;
    E.T = T;
    E.grid_step = e_step;
    for (u64 i : idx)
        E.member_points.push_back(-T + static_cast<double>(i) * e_step);
    E.measure_estimate = e_step * static_cast<double>(E.member_points.size());

    dirichlet::HalaszMontgomeryResult r =
        dirichlet::halasz_montgomery_ratio(poly, E, T, prime_variant);
    CommandOut co;
    co.params = {{"random_n", random_n},
                 {"prime_p", prime_p},
                 {"t", T},
                 {"e_count", e_count},
                 {"e_step", e_step}};
    co.results = {{"prime_variant", prime_variant},
                  {"lhs", r.integral},
                  {"rhs", r.denom},
                  {"integral", r.integral},
                  {"denom", r.denom},
                  {"ratio", r.ratio},
                  {"e_count", e_count},
                  {"e_measure", E.measure_estimate}};
    return co;
}

CommandOut run_decompose(const std::string& layers_s, u64 x, bool verify,
                         bool turan, bool restricted) {
    std::vector<dirichlet::PrimeInterval> layers = parse_layers(layers_s);
    auto [meta, poly] = dirichlet::build_decomposition(layers, x);

    CommandOut co;
    co.params = {{"layers", layers_s},
                 {"x", x},
                 {"verify", verify},
                 {"turan", turan},
                 {"restricted", restricted}};
    ordered_json jl = ordered_json::array();
    for (const auto& li : meta.layers) {
        ordered_json jb = ordered_json::array();
        for (const auto& b : li.blocks)
            jb.push_back({{"nominal_lo", b.nominal_lo},
                          {"nominal_hi", b.nominal_hi},
                          {"lo", b.lo},
                          {"hi", b.hi},
                          {"prime_count", b.prime_count}});
        jl.push_back({{"lo", li.interval.lo},
                      {"hi", li.interval.hi},
                      {"prime_count", li.prime_count},
                      {"w", li.W},
                      {"blocks", jb}});
    }
    double l1 = 0.0;
    u64 nnz = 0;
    for (const auto& c : poly.coeffs) {
        if (c.real() == 0.0 && c.imag() == 0.0) continue;
        ++nnz;
        l1 += std::abs(c);
    }
    co.results = {{"x", x},
                  {"layers", jl},
                  {"support_lo", poly.support_lo},
                  {"support_hi", poly.support_hi},
                  {"nnz", nnz},
                  {"coeff_l1", l1},
                  {"provenance", poly.provenance}};
    if (verify) {
        u64 bad = dirichlet::decomposition_mismatches(poly, layers, x);
        co.results["verify"] = {{"range_lo", x},
                                {"range_hi", 2 * x},
                                {"mismatches", bad},
                                {"exact", bad == 0}};
    }
    if (turan) {
        ordered_json jt = ordered_json::array();
        for (const auto& iv : layers) {
            dirichlet::TuranResult tr = dirichlet::turan_variance(iv, x);
            jt.push_back({{"lo", iv.lo},
                          {"hi", iv.hi},
                          {"variance", tr.variance},
                          {"w", tr.W},
                          {"ratio", tr.ratio}});
        }
        co.results["turan"] = jt;
    }
    if (restricted) {
        ordered_json jr = ordered_json::array();
        for (const auto& iv : layers) {
            dirichlet::RestrictedFactorizationReport rr =
                dirichlet::restricted_factorization_error(iv, x);
            jr.push_back({{"lo", iv.lo},
                          {"hi", iv.hi},
                          {"max_abs_error", rr.max_abs_error},
                          {"argmax_n", rr.argmax_n},
                          {"sum_abs_error", rr.sum_abs_error},
                          {"sum_abs_exact", rr.sum_abs_exact},
                          {"error_ratio", rr.error_ratio},
                          {"support_on_squares", rr.support_on_squares},
                          {"error_support_count", rr.error_support_count},
                          {"support", rr.support_description}});
        }
        co.results["restricted"] = jr;
    }
    return co;
}

CommandOut run_twisted(const GlobalOpts& g, const std::string& kind_s, u64 x,
                       const std::string& ts) {
    dirichlet::TwistKind kind = dirichlet::parse_twist_kind(kind_s);
    std::vector<double> t_values = parse_f64_list(ts, "t value");
    if (t_values.empty()) fail_arg("twisted needs at least one t value");
    std::vector<dirichlet::TwistPoint> pts =
        dirichlet::twisted_sum_profile(kind, x, t_values, g.threads);
    CommandOut co;
    co.params = {{"kind", kind_s}, {"x", x}, {"t", t_values}};
    ordered_json rows = ordered_json::array();
    std::string csv = "t,abs_sum,trivial_bound,ratio\n";
    for (const auto& p : pts) {
        rows.push_back({{"t", p.t},
                        {"abs_sum", p.abs_sum},
                        {"trivial_bound", p.trivial_bound},
                        {"ratio", p.ratio}});
        csv += emit::csv_row({emit::fmt_g12(p.t), emit::fmt_g12(p.abs_sum),
                              emit::fmt_g12(p.trivial_bound),
                              emit::fmt_g12(p.ratio)});
    }
    co.results = {{"kind", kind_s}, {"x", x}, {"points", rows}};
    co.csv = csv;
    return co;
}

CommandOut run_wirsing(const GlobalOpts& g, const std::string& f, u64 n,
                       u64 cutoff) {
    multfunc::MultiplicativeFunctionSpec spec = load_spec(f);
    if (cutoff == 0) cutoff = std::min<u64>(n, 1000000);
    multfunc::WirsingReport r = multfunc::wirsing_mean(spec, n, cutoff, g.threads);
    CommandOut co;
    co.params = {{"f", f}, {"n", n}, {"cutoff", cutoff}};
    co.results = {{"f", f},
                  {"n", r.N},
                  {"cutoff", r.cutoff},
                  {"partial_product", r.partial_product},
                  {"empirical_mean", r.empirical_mean},
                  {"alpha", r.alpha},
                  {"beta", r.beta},
                  {"distance", r.distance}};
    return co;
}

CommandOut run_signchanges(const GlobalOpts& g, const std::string& f, u64 n) {
    multfunc::MultiplicativeFunctionSpec spec = load_spec(f);
    multfunc::SignChangeReport r = multfunc::sign_changes(spec, n, g.threads);
    CommandOut co;
    co.params = {{"f", f}, {"n", n}};
    co.results = {{"f", f},
                  {"n", r.N},
                  {"count", r.count},
                  {"proportion", r.proportion},
                  {"nonzero_count", r.nonzero_count},
                  {"all_zero", r.all_zero}};
    return co;
}

CommandOut run_smooth(u64 n, double eps, double C) {
    multfunc::SmoothWitness w = multfunc::smooth_in_interval(n, eps, C);
    CommandOut co;
    co.params = {{"n", n}, {"eps", eps}, {"c", C}};
    co.results = {{"n", n},
                  {"eps", eps},
                  {"c", C},
                  {"bound", w.bound},
                  {"scan_hi", w.scan_hi},
                  {"found", w.found},
                  {"witness", w.witness},
                  {"offset", w.offset}};
    return co;
}

CommandOut run_shortlong(const GlobalOpts& g, const std::string& f, u64 x, u64 h,
                         u64 step, double eps) {
    multfunc::MultiplicativeFunctionSpec spec = load_spec(f);
    multfunc::ShortLongReport r =
        multfunc::short_vs_long(spec, x, h, step, eps, g.threads);
    CommandOut co;
    co.params = {{"f", f}, {"x", x}, {"h", h}, {"step", step}, {"eps", eps}};
    co.results = {{"f", f},
                  {"x", r.X},
                  {"h", r.h},
                  {"step", r.step},
                  {"eps", r.eps},
                  {"count", r.count},
                  {"long_average", r.long_average},
                  {"dev_min", r.dev_min},
                  {"dev_p25", r.dev_p25},
                  {"dev_p50", r.dev_p50},
                  {"dev_p75", r.dev_p75},
                  {"dev_p90", r.dev_p90},
                  {"dev_p99", r.dev_p99},
                  {"dev_max", r.dev_max},
                  {"exceptional_count", r.exceptional_count},
                  {"exceptional_fraction", r.exceptional_fraction}};
    return co;
}

} // namespace

int main(int argc, char** argv) {
    GlobalOpts g;
    try {
        CLI::App app{"liouville-lab: Liouville/Mobius statistics, correlations, "
                     "and Dirichlet-polynomial diagnostics"};
        // long-only help: several subcommands expose an --h option
        app.set_help_flag("--help", "print this help message and exit");
        app.require_subcommand(1);
        app.add_option("--seed", g.seed, "seed for randomized trials");
        app.add_option("--threads", g.threads, "worker threads (0 = auto)");
        app.add_option("--format", g.format, "csv or json");
        app.add_option("--output", g.output, "output path (default stdout)");
        app.add_option("--golden-dir", g.golden_dir,
                       "golden snapshot directory (env LIOUVILLE_LAB_GOLDEN wins)");
        app.add_option("--golden", g.golden_name,
                       "record/compare a golden snapshot under this name");
        app.add_option("--simd", g.simd, "kernel dispatch: auto|scalar|avx2");

        // sieve
        u64 sv_lo = 1, sv_hi = 0;
        bool sv_lpf = false;
        std::string sv_cache;
        auto* sub_sieve = app.add_subcommand("sieve", "factor-table summary");
        sub_sieve->fallthrough();
        sub_sieve->add_option("--lo", sv_lo)->required();
        sub_sieve->add_option("--hi", sv_hi)->required();
        sub_sieve->add_flag("--lpf", sv_lpf, "store largest prime factors");
        sub_sieve->add_option("--emit-cache", sv_cache, "write binary table cache");

        // variance
        u64 va_x = 0, va_h = 0, va_step = 1;
        std::string va_weight = "lambda", va_thresholds, va_csv;
        auto* sub_va = app.add_subcommand("variance", "short-interval variance scan");
        sub_va->fallthrough();
        sub_va->add_option("--x", va_x)->required();
        sub_va->add_option("--h", va_h)->required();
        sub_va->add_option("--step", va_step);
        sub_va->add_option("--weight", va_weight, "lambda|mangoldt");
        sub_va->add_option("--thresholds", va_thresholds, "comma list of eps");
        sub_va->add_option("--csv", va_csv, "shorthand: csv format to this path");

        // patterns
        u64 pt_n = 0;
        int pt_k = 1;
        auto* sub_pt = app.add_subcommand("patterns", "sign-pattern census");
        sub_pt->fallthrough();
        sub_pt->add_option("--n", pt_n)->required();
        sub_pt->add_option("--k", pt_k)->required();

        // correlate
        u64 co_n = 0;
        std::string co_shifts;
        auto* sub_co = app.add_subcommand("correlate", "shifted autocorrelation");
        sub_co->fallthrough();
        sub_co->add_option("--n", co_n)->required();
        sub_co->add_option("--shifts", co_shifts)->required();

        // avg-chowla
        u64 ac_x = 0, ac_h = 0;
        int ac_k = 2;
        auto* sub_ac = app.add_subcommand("avg-chowla", "averaged Chowla statistic");
        sub_ac->fallthrough();
        sub_ac->add_option("--x", ac_x)->required();
        sub_ac->add_option("--h", ac_h)->required();
        sub_ac->add_option("--k", ac_k)->required();

        // log-chowla
        u64 lc_x = 0, lc_shift = 1;
        auto* sub_lc = app.add_subcommand("log-chowla", "logarithmic Chowla statistic");
        sub_lc->fallthrough();
        sub_lc->add_option("--x", lc_x)->required();
        sub_lc->add_option("--shift", lc_shift);

        // discrepancy
        u64 di_n = 0;
        std::string di_f = "lambda";
        auto* sub_di = app.add_subcommand("discrepancy", "progression partial-sum scan");
        sub_di->fallthrough();
        sub_di->add_option("--n", di_n)->required();
        sub_di->add_option("--f", di_f, "lambda | builtin | spec file");

        // plancherel
        std::string pl_coeffs, pl_lrange;
        u64 pl_random = 0;
        double pl_t = 1.0, pl_ymax = 0.0, pl_step = 0.0;
        auto* sub_pl = app.add_subcommand("plancherel", "window/frequency identity check");
        sub_pl->fallthrough();
        sub_pl->add_option("--coeffs", pl_coeffs, "CSV n,re,im");
        sub_pl->add_option("--liouville-range", pl_lrange, "A,B");
        sub_pl->add_option("--random-n", pl_random,
                           "random unit coefficients on [1,N]");
        sub_pl->add_option("--t", pl_t)->required();
        sub_pl->add_option("--y-max", pl_ymax, "override truncation");
        sub_pl->add_option("--step", pl_step, "override grid step");

        // meanvalue
        std::string mv_coeffs, mv_lrange;
        u64 mv_random = 0;
        double mv_t = 1.0;
        auto* sub_mv = app.add_subcommand("meanvalue", "mean-value ratio");
        sub_mv->fallthrough();
        sub_mv->add_option("--coeffs", mv_coeffs);
        sub_mv->add_option("--liouville-range", mv_lrange);
        sub_mv->add_option("--random-n", mv_random, "random unit coefficients on [1,N]");
        sub_mv->add_option("--t", mv_t)->required();

        // large-values
        std::string lv_coeffs;
        u64 lv_p = 0;
        double lv_t = 0.0, lv_v = 3.0, lv_step = 0.0;
        bool lv_points = false;
        auto* sub_lv = app.add_subcommand("large-values", "exceptional-set measure");
        sub_lv->fallthrough();
        sub_lv->add_option("--p", lv_p)->required();
        sub_lv->add_option("--t", lv_t)->required();
        sub_lv->add_option("--v", lv_v)->required();
        sub_lv->add_option("--step", lv_step)->required();
        sub_lv->add_option("--coeffs", lv_coeffs, "prime coefficients (default all 1)");
        sub_lv->add_flag("--emit-points", lv_points);

        // hm-ratio
        u64 hm_random = 0, hm_prime = 0, hm_ecount = 50;
        double hm_t = 0.0, hm_estep = 1e-3;
        auto* sub_hm = app.add_subcommand("hm-ratio", "energy over an exceptional set");
        sub_hm->fallthrough();
        sub_hm->add_option("--random-n", hm_random);
        sub_hm->add_option("--prime-p", hm_prime);
        sub_hm->add_option("--t", hm_t)->required();
        sub_hm->add_option("--e-count", hm_ecount);
        sub_hm->add_option("--e-step", hm_estep);

        // decompose
        std::string dc_layers;
        u64 dc_x = 0;
        bool dc_verify = false, dc_turan = false, dc_restricted = false;
        auto* sub_dc = app.add_subcommand("decompose", "layered prime-block coefficients");
        sub_dc->fallthrough();
        sub_dc->add_option("--layers", dc_layers, "e.g. 2:10;100:1000")->required();
        sub_dc->add_option("--x", dc_x)->required();
        sub_dc->add_flag("--verify", dc_verify, "check a(n) identity on [X,2X]");
        sub_dc->add_flag("--turan", dc_turan, "per-layer omega variance");
        sub_dc->add_flag("--restricted", dc_restricted,
                         "omega+1-weighted factorization error");

        // twisted
        std::string tw_kind = "liouville", tw_t;
        u64 tw_x = 0;
        auto* sub_tw = app.add_subcommand("twisted", "twisted sum cancellation profile");
        sub_tw->fallthrough();
        sub_tw->add_option("--kind", tw_kind, "liouville|primes");
        sub_tw->add_option("--x", tw_x)->required();
        sub_tw->add_option("--t", tw_t, "comma list of frequencies")->required();

        // wirsing
        std::string wi_f = "mu2";
        u64 wi_n = 0, wi_cutoff = 0;
        auto* sub_wi = app.add_subcommand("wirsing", "mean-value report");
        sub_wi->fallthrough();
        sub_wi->add_option("--f", wi_f, "builtin or spec file");
        sub_wi->add_option("--n", wi_n)->required();
        sub_wi->add_option("--cutoff", wi_cutoff, "prime cutoff (default min(n,1e6))");

        // signchanges
        std::string sc_f = "mu";
        u64 sc_n = 0;
        auto* sub_sc = app.add_subcommand("signchanges", "adjacent nonzero sign flips");
        sub_sc->fallthrough();
        sub_sc->add_option("--f", sc_f);
        sub_sc->add_option("--n", sc_n)->required();

        // smooth
        u64 sm_n = 0;
        double sm_eps = 0.5, sm_c = 10.0;
        auto* sub_sm = app.add_subcommand("smooth", "smooth witness in [N, N+C*sqrt(N)]");
        sub_sm->fallthrough();
        sub_sm->add_option("--n", sm_n)->required();
        sub_sm->add_option("--eps", sm_eps)->required();
        sub_sm->add_option("--c", sm_c)->required();

        // shortlong
        std::string sl_f = "lambda";
        u64 sl_x = 0, sl_h = 0, sl_step = 1;
        double sl_eps = 0.1;
        auto* sub_sl = app.add_subcommand("shortlong", "short vs long average deviations");
        sub_sl->fallthrough();
        sub_sl->add_option("--f", sl_f);
        sub_sl->add_option("--x", sl_x)->required();
        sub_sl->add_option("--h", sl_h)->required();
        sub_sl->add_option("--step", sl_step);
        sub_sl->add_option("--eps", sl_eps)->required();

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }

        if (g.simd != "auto" || std::getenv("LIOUVILLE_LAB_SIMD") == nullptr)
            kernels::force_dispatch(g.simd.c_str());

        if (!va_csv.empty()) {
            g.format = "csv";
            g.output = va_csv;
        }

        CommandOut co;
        std::string cmd;
        if (sub_sieve->parsed()) {
            cmd = "sieve";
            co = run_sieve(sv_lo, sv_hi, sv_lpf, sv_cache);
        } else if (sub_va->parsed()) {
            cmd = "variance";
            co = run_variance(g, va_x, va_h, va_step, va_weight, va_thresholds);
        } else if (sub_pt->parsed()) {
            cmd = "patterns";
            co = run_patterns(g, pt_n, pt_k);
        } else if (sub_co->parsed()) {
            cmd = "correlate";
            co = run_correlate(g, co_n, co_shifts);
        } else if (sub_ac->parsed()) {
            cmd = "avg-chowla";
            co = run_avg_chowla(g, ac_x, ac_h, ac_k);
        } else if (sub_lc->parsed()) {
            cmd = "log-chowla";
            co = run_log_chowla(g, lc_x, lc_shift);
        } else if (sub_di->parsed()) {
            cmd = "discrepancy";
            co = run_discrepancy(g, di_n, di_f);
        } else if (sub_pl->parsed()) {
            cmd = "plancherel";
            co = run_plancherel(g, pl_coeffs, pl_lrange, pl_random, pl_t, pl_ymax,
                                pl_step);
        } else if (sub_mv->parsed()) {
            cmd = "meanvalue";
            co = run_meanvalue(g, mv_coeffs, mv_lrange, mv_random, mv_t);
        } else if (sub_lv->parsed()) {
            cmd = "large-values";
            co = run_large_values(lv_coeffs, lv_p, lv_t, lv_v, lv_step, lv_points);
        } else if (sub_hm->parsed()) {
            cmd = "hm-ratio";
            co = run_hm_ratio(g, hm_random, hm_prime, hm_t, hm_ecount, hm_estep);
        } else if (sub_dc->parsed()) {
            cmd = "decompose";
            co = run_decompose(dc_layers, dc_x, dc_verify, dc_turan, dc_restricted);
        } else if (sub_tw->parsed()) {
            cmd = "twisted";
            co = run_twisted(g, tw_kind, tw_x, tw_t);
        } else if (sub_wi->parsed()) {
            cmd = "wirsing";
            co = run_wirsing(g, wi_f, wi_n, wi_cutoff);
        } else if (sub_sc->parsed()) {
            cmd = "signchanges";
            co = run_signchanges(g, sc_f, sc_n);
        } else if (sub_sm->parsed()) {
            cmd = "smooth";
            co = run_smooth(sm_n, sm_eps, sm_c);
        } else if (sub_sl->parsed()) {
            cmd = "shortlong";
            co = run_shortlong(g, sl_f, sl_x, sl_h, sl_step, sl_eps);
        } else {
            fail_arg("no subcommand selected");
        }
        emit_output(g, cmd, std::move(co));
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
