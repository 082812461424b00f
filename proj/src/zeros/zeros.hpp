#pragma once

#include "forms/instance.hpp"

#include <map>
#include <optional>
#include <utility>

namespace oppairs {

// All primitive projective solutions of Q ≡ L ≡ 0 mod p, canonical
// representatives (coordinates in [0, p), first unit coordinate 1), sorted
// lexicographically. Exhaustive over ℙ(𝔽_p^n) — cost grows like p^{n-1}.
std::vector<std::vector<Int>> zeros_mod_p(const QuadForm<Rat>& q, const LinForm<Rat>& l, long long p);

// A p-adic zero of the pair good enough for Newton refinement: the
// congruences hold mod p^{precision+nu}, and the derivative of Q along the
// L-preserving direction through coordinate newton_index has valuation nu.
// Refinement to any precision then stays ≡ z mod p^{precision}.
struct ZeroCertificate {
    long long p = 0;
    int precision = 0;
    std::vector<Int> z;
    int newton_index = -1;
    int nu = 0;
};

// Builds a certificate from a vector solving the congruences mod p^level
// (pass l = nullptr for a single-form zero). Fails when every admissible
// direction has derivative valuation too large for the level (singular zero).
std::optional<ZeroCertificate> certificate_from_class(const QuadForm<Rat>& q, const LinForm<Rat>* l,
                                                      long long p, const std::vector<Int>& z,
                                                      int level);

// Newton refinement of a certified zero to Q ≡ 0 (and L ≡ 0) mod p^target_m.
// Output is reduced mod p^target_m and ≡ cert.z mod p^{cert.precision}.
// Throws domain_error on an invalid (singular) certificate.
std::vector<Int> hensel_lift(const QuadForm<Rat>& q, const LinForm<Rat>* l,
                             const ZeroCertificate& cert, int target_m);

// Iterative deepening over solution classes of Q ≡ 0 mod p^level until one
// supports a certificate; nullopt when none appears by max_level (in
// particular for anisotropic forms, where classes die out).
std::optional<ZeroCertificate> smooth_local_zero(const QuadForm<Rat>& q, long long p, int max_level);

// One congruence constraint combining all finite places: any integer vector
// ≡ residue mod modulus satisfies v_p(Q_p(x)) ≥ m_p and v_p(L_p(x)) ≥ m_p for
// every finite place, and is primitive at each p with positive precision.
struct CongruenceClass {
    Int modulus;
    std::vector<Int> residue;
    std::vector<std::pair<long long, int>> place_precision;  // (p, levels used at p)
};

struct CongruenceStream {
    std::vector<CongruenceClass> classes;
    bool provably_empty = false;  // no class exists at the requested precisions
    bool truncated = false;       // enumeration caps cut the listing short
};

// Precision making |t|_p < eps whenever v_p(t) ≥ m: m = ceil(-log_p eps) + 1.
int precision_for_eps(const Rat& eps, long long p);

// Classes are grown level by level: mod-p solutions from exhaustive
// enumeration, then each refinement level solves the exact linearized system
// over 𝔽_p and keeps the whole solution fiber, so for small moduli the
// stream provably equals exhaustive enumeration. Per-place lists are
// canonicalized, sorted, capped at limit, then combined across places by CRT
// in odometer order; the emitted classes are sorted lexicographically by
// residue. Every emitted class is re-verified against the instance exactly.
CongruenceStream congruence_classes(const PairInstance& inst, const std::map<long long, int>& precision,
                                    long long limit);

}  // namespace oppairs
