// Deterministic serialization (12 significant digits, round-half-even via
// printf %g), CSV helpers, and the golden-snapshot store with per-field
// tolerances.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "liouville/common.hpp"

namespace liouville::emit {

using ordered_json = nlohmann::ordered_json;

// %.12g formatting; the cross-platform reproducible float form.
std::string fmt_g12(double v);

// Recursively replaces every float in j by its 12-significant-digit rounding
// so in-memory values equal their serialized form.
void normalize_floats(ordered_json& j);

// normalize_floats + dump with 2-space indent and trailing newline.
std::string dump_normalized(ordered_json j);

std::string csv_escape(const std::string& s);
std::string csv_row(const std::vector<std::string>& cells);

u64 fnv1a(const std::string& s);

enum class GoldenStatus { written, matched };

struct GoldenOutcome {
    GoldenStatus status = GoldenStatus::written;
    std::string path;
};

// One snapshot per name: {name, params_hash, params, tolerances, payload}.
// First record() writes; later calls compare field by field. Float fields use
// the relative tolerance declared in the snapshot (longest dotted-path prefix
// match, default 1e-9); everything else compares exactly. Parameter changes
// are refused outright via the params hash.
class GoldenStore {
  public:
    explicit GoldenStore(std::filesystem::path dir);

    GoldenOutcome record(const std::string& name, const ordered_json& params,
                         const ordered_json& payload,
                         const std::map<std::string, double>& tolerances = {});

    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
};

} // namespace liouville::emit
