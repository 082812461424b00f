#pragma once

#include "io/instance_io.hpp"
#include "io/report.hpp"
#include "search/search.hpp"

#include <map>
#include <string>
#include <vector>

namespace oppairs {

// One run = one instance, one mode, one epsilon schedule. For search the
// schedule must be a single bound per place; for experiment the per-place
// lists are crossed row-major (archimedean outermost, primes ascending,
// rightmost fastest).
struct RunConfig {
    std::string mode;  // check | search | experiment | reduce | obstruct
    std::vector<Rat> eps_arch;
    std::map<long long, std::vector<Rat>> eps_p;
    SearchBudget budget;
    bool override_hypotheses = false;
    long long height = 20;
    std::string format = "json";  // json | csv
};

// config document: {"mode": "...", "eps_arch": ["1","1/2"], "eps_p":
// {"5": ["1/5"]}, "budget": {"max_steps": N, "max_classes": N,
// "wall_ms": N, "seed": N}, "override_hypotheses": false, "height": 20,
// "format": "json"} — every key except mode optional
RunConfig parse_run_config(const std::string& json_text);

Report run_instance(const PairInstance& inst, const RunConfig& cfg);

std::string emit_report(const Report& r, const std::string& format);

}  // namespace oppairs
