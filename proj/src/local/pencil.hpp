#pragma once

#include "forms/instance.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace oppairs {

/*
 * Rational-pencil analysis. At each place s the coefficient pairs
 * (alpha_s, beta_s) for which alpha_s Q_s + beta_s L_s^2 is a rational form
 * constitute an exact linear locus (for rational coefficient data it is the
 * whole pencil; over the quadratic extension it is the kernel of the
 * irrational-part system in the four rational coordinates of (alpha, beta)).
 * W_s denotes the attainable rational forms at s, a subspace of the
 * coefficient space; the obstruction configuration is a single nonzero
 * rational form Q0 lying in every W_s, reachable at every place with
 * alpha_s != 0.  Condition (3) holds iff no such Q0 exists.
 */
struct PencilPlaceReport {
    PlaceId place;
    bool locus_everything = false;  // every (alpha:beta) already rational
    // basis of the coefficient solution space, as (alpha, beta) pairs
    std::vector<std::pair<ExtReal, ExtReal>> locus_basis;
    int w_dim = 0;  // attainable rational forms at this place
    // no element of the global intersection is reachable here with alpha != 0
    bool alpha_blocked = false;
};

struct PencilReport {
    bool irrational = true;  // condition (3) under the alpha_s != 0 reading
    int common_dim = 0;      // dim of the intersection of all W_s
    // canonical integral primitive candidate when common_dim > 0; for the
    // degenerate configuration this is the common rational form itself
    std::optional<QuadForm<Rat>> common_q0;
    std::vector<PlaceId> s_prime;  // places where common_q0 is reachable with alpha_s != 0
    std::vector<PlaceId> t_places; // the remaining places
    // stricter readings of the admissibility filter, reported for comparison
    bool fails_units_reading = false;         // alpha_s != 0 and beta_s != 0
    bool fails_not_both_zero_reading = false; // (alpha_s, beta_s) != (0, 0)
    std::vector<PencilPlaceReport> places;
};

PencilReport pencil_rationality(const PairInstance& inst);

}  // namespace oppairs
