#pragma once

#include "forms/instance.hpp"
#include "local/hypotheses.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oppairs {

// per-place strict bounds; one value governs both |Q_s| and |L_s| at s
struct EpsMap {
    Rat arch;
    std::map<long long, Rat> finite;  // keyed by prime, must match the instance
};

struct SearchBudget {
    long long max_steps = 1000000;
    long long max_classes = 64;
    long long wall_ms = 0;  // 0 disables the wall-clock cap
    unsigned long long seed = 1;
};

// exact per-place evaluation record; finite magnitudes are rationals, the
// archimedean one is the signed exact value (its |.| decided by sign analysis)
struct PlaceMagnitudes {
    PlaceId place;
    Rat q_abs;          // finite places: |Q_p(x)|_p
    Rat l_abs;
    ExtReal q_value;    // archimedean place: exact Q_inf(x)
    ExtReal l_value;
    bool q_exact_zero = false;
    bool l_exact_zero = false;
};

struct Witness {
    Vec<Rat> x;  // S-integral: denominator primes within the instance's
    EpsMap eps;
    std::vector<PlaceMagnitudes> places;
    std::vector<std::string> transcript;  // deterministic evaluation trace
};

struct Violation {
    PlaceId place;
    std::string what;  // violated inequality with the exact margin
};

struct VerifyResult {
    std::optional<Witness> witness;
    std::vector<Violation> violations;
};

// thrown when an operation requires the three hypotheses and they fail
struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& m) : std::runtime_error(m) {}
};

// Exact re-evaluation from scratch: returns a Witness iff every strict
// inequality holds, otherwise the violated inequalities with exact margins.
// x = 0 and eps <= 0 are precondition errors; so is a denominator outside
// the instance's primes.
VerifyResult verify_witness(const PairInstance& inst, const Vec<Rat>& x, const EpsMap& eps);

struct SearchOutcome {
    std::optional<Witness> witness;
    long long steps = 0;
    std::string strategy;  // which engine produced the witness
    bool exhausted() const { return !witness.has_value(); }
};

// Strategies in order: congruence-coset enumeration, hyperbolic-family
// parametrization, then the finite-place multiplier fallback; deterministic
// given (instance, eps, budget). Hypotheses are enforced unless overridden.
SearchOutcome search_witness(const PairInstance& inst, const EpsMap& eps, const SearchBudget& budget,
                             bool override_hypotheses = false);

struct ExperimentRow {
    EpsMap eps;
    std::optional<Witness> witness;
    long long steps = 0;
    bool reused = false;  // witness inherited from a tighter row
    std::string strategy;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;  // in schedule order
};

// One search per schedule entry, tightest entries first, witnesses reused
// for any entry they dominate; rows come back in schedule order. Per place,
// the distinct bounds must appear in strictly decreasing order.
ExperimentReport epsilon_experiment(const PairInstance& inst, const std::vector<EpsMap>& schedule,
                                    const SearchBudget& budget_per_entry, bool override_hypotheses = false);

struct ReductionResult {
    Vec<Rat> functional;      // hyperplane M; the restriction lives on ker M
    PairInstance restricted;  // dimension n-1, passes check_hypotheses
    long long samples = 0;
};

// Enumerates primitive integer functionals by increasing height and returns
// the first whose restricted pair passes all three hypotheses; nullopt after
// the sample budget.
std::optional<ReductionResult> reduce_dimension(const PairInstance& inst, const SearchBudget& budget);

struct ObstructionScan {
    bool empty = true;        // H = 0 or no nonzero values seen
    Rat min_max_magnitude;    // min over enumerated x of max_s |Q0(x)|_s
    Vec<Rat> argmin;          // an x attaining it
    long long values_seen = 0;
};

// Enumerates S-vectors of height <= H (numerators bounded by H, denominator
// exponents bounded by log_p H) against the common rational form and reports
// the smallest max-place magnitude among nonzero values; the product-formula
// floor (>= 1) is asserted. Requires a rational pencil (condition (3) failing).
ObstructionScan obstruction_scan(const PairInstance& inst, long long height);

}  // namespace oppairs
