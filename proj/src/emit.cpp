#include "liouville/emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace liouville::emit {

std::string fmt_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void normalize_floats(ordered_json& j) {
    if (j.is_number_float()) {
        j = std::strtod(fmt_g12(j.get<double>()).c_str(), nullptr);
    } else if (j.is_object() || j.is_array()) {
        for (auto& el : j) normalize_floats(el);
    }
}

std::string dump_normalized(ordered_json j) {
    normalize_floats(j);
    return j.dump(2) + "\n";
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(cells[i]);
    }
    out += '\n';
    return out;
}

u64 fnv1a(const std::string& s) {
    u64 h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---- golden store ---------------------------------------------------------------

namespace {

std::string hash_hex(u64 h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double tolerance_for(const std::map<std::string, double>& tol,
                     const std::string& path) {
    std::string p = path;
    for (;;) {
        auto it = tol.find(p);
        if (it != tol.end()) return it->second;
        std::size_t dot = p.find_last_of('.');
        if (dot == std::string::npos) break;
        p.resize(dot);
    }
    return 1e-9;
}

void compare_payload(const ordered_json& want, const ordered_json& got,
                     const std::map<std::string, double>& tol,
                     const std::string& path) {
    auto mismatch = [&](const std::string& detail) {
        throw std::runtime_error("golden mismatch at " +
                                 (path.empty() ? std::string("<root>") : path) +
                                 ": " + detail);
    };
    if (want.is_number_float() || got.is_number_float()) {
        if (!(want.is_number() && got.is_number()))
            mismatch("type differs (stored " + want.dump() + ", got " +
                     got.dump() + ")");
        double a = want.get<double>(), b = got.get<double>();
        double t = tolerance_for(tol, path);
        double scale = std::max(std::fabs(a), std::fabs(b));
        bool ok = a == b || std::fabs(a - b) <= t * scale || scale < 1e-12;
        if (!ok)
            mismatch("stored " + fmt_g12(a) + ", got " + fmt_g12(b) +
                     " (rel tol " + fmt_g12(t) + ")");
        return;
    }
    if (want.is_number() && got.is_number()) {
        // text round-trips erase nlohmann's signed/unsigned tag: compare values
        bool wneg = want.is_number_integer() && want.get<i64>() < 0;
        bool gneg = got.is_number_integer() && got.get<i64>() < 0;
        bool eq = wneg == gneg && (wneg ? want.get<i64>() == got.get<i64>()
                                        : want.get<u64>() == got.get<u64>());
        if (!eq)
            mismatch("stored " + want.dump() + ", got " + got.dump());
        return;
    }
    if (want.type() != got.type())
        mismatch("type differs (stored " + want.dump() + ", got " + got.dump() +
                 ")");
    if (want.is_object()) {
        for (auto it = want.begin(); it != want.end(); ++it) {
            if (!got.contains(it.key())) mismatch("missing key " + it.key());
            compare_payload(it.value(), got.at(it.key()), tol,
                            path.empty() ? it.key() : path + "." + it.key());
        }
        for (auto it = got.begin(); it != got.end(); ++it)
            if (!want.contains(it.key())) mismatch("extra key " + it.key());
        return;
    }
    if (want.is_array()) {
        if (want.size() != got.size())
            mismatch("array size " + std::to_string(want.size()) + " vs " +
                     std::to_string(got.size()));
        for (std::size_t i = 0; i < want.size(); ++i)
            compare_payload(want[i], got[i], tol, path + "." + std::to_string(i));
        return;
    }
    if (want != got)
        mismatch("stored " + want.dump() + ", got " + got.dump());
}

} // namespace

GoldenStore::GoldenStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

GoldenOutcome GoldenStore::record(const std::string& name,
                                  const ordered_json& params,
                                  const ordered_json& payload,
                                  const std::map<std::string, double>& tol) {
    std::filesystem::create_directories(dir_);
    std::filesystem::path file = dir_ / (name + ".json");

    ordered_json nparams = params;
    normalize_floats(nparams);
    ordered_json npayload = payload;
    normalize_floats(npayload);
    std::string phash = hash_hex(fnv1a(nparams.dump()));

    GoldenOutcome out;
    out.path = file.string();
    if (!std::filesystem::exists(file)) {
        ordered_json snap;
        snap["name"] = name;
        snap["params_hash"] = phash;
        snap["params"] = nparams;
        ordered_json jt = ordered_json::object();
        for (const auto& [k, v] : tol) jt[k] = v;
        snap["tolerances"] = jt;
        snap["payload"] = npayload;
        std::ofstream f(file);
        if (!f) throw std::runtime_error("cannot write golden file " + out.path);
        f << snap.dump(2) << "\n";
        out.status = GoldenStatus::written;
        return out;
    }

    std::ifstream f(file);
    if (!f) throw std::runtime_error("cannot read golden file " + out.path);
    ordered_json snap;
    try {
        f >> snap;
    } catch (const std::exception& e) {
        throw std::runtime_error("corrupt golden file " + out.path + ": " +
                                 e.what());
    }
    if (snap.value("params_hash", std::string()) != phash)
        throw std::runtime_error("golden parameter hash mismatch for '" + name +
                                 "': comparison refused (delete " + out.path +
                                 " to re-record)");
    std::map<std::string, double> stored_tol;
    if (snap.contains("tolerances"))
        for (auto it = snap["tolerances"].begin(); it != snap["tolerances"].end();
             ++it)
            stored_tol[it.key()] = it.value().get<double>();
    compare_payload(snap.at("payload"), npayload, stored_tol, "");
    out.status = GoldenStatus::matched;
    return out;
}

} // namespace liouville::emit
