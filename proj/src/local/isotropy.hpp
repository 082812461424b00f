#pragma once

#include "forms/forms.hpp"
#include "zeros/zeros.hpp"

#include <optional>
#include <string>

namespace oppairs {

// inertia counts of a symmetric form; zero counts the radical
struct Signature {
    int pos = 0;
    int neg = 0;
    int zero = 0;
};

Signature signature(const QuadForm<ExtReal>& q);
Signature signature(const QuadForm<Rat>& q);

// Outcome of a local isotropy decision. A positive verdict always carries a
// criterion trace; at finite places it additionally carries a refinable local
// zero certificate, and exact_vector is filled when a small rational zero
// exists (it need not: x^2 - 2y^2 is real-isotropic with no rational zero).
struct IsotropyVerdict {
    bool isotropic = false;
    std::string criterion;                 // decision trace (signature / Hasse data)
    std::optional<Vec<Rat>> exact_vector;  // rational v != 0 with q(v) = 0 exactly
    std::optional<ZeroCertificate> hensel; // finite places: certified p-adic zero
};

// Degenerate input is rejected at every place.
IsotropyVerdict is_isotropic_arch(const QuadForm<ExtReal>& q);
IsotropyVerdict is_isotropic_finite(const QuadForm<Rat>& q, long long p);
IsotropyVerdict is_isotropic_local(const QuadForm<Rat>& q, const PlaceId& s);

}  // namespace oppairs
