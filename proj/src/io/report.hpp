#pragma once

#include "json.hpp"

#include <string>
#include <vector>

namespace oppairs {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// Machine-readable run record. The json-lines form is one object per line:
// a header line (version, instance digest, mode), one line per row, and a
// closing status line (status, exit code, elapsed wall time). Re-running
// with the same inputs reproduces everything except elapsed_ms.
struct Report {
    std::string version = kToolVersion;
    std::string instance_digest;
    std::string mode;
    std::vector<Json> rows;
    std::string status = "ok";
    int exit_code = 0;
    long long elapsed_ms = 0;

    bool operator==(const Report&) const = default;
};

std::string emit_report_jsonl(const Report& r);

// header-only when no row carries epsilon data; columns are pinned for
// plotting; multi-prime entries join ascending-p values with ';'
std::string emit_report_csv(const Report& r);

Report parse_report_jsonl(const std::string& text);

}  // namespace oppairs
