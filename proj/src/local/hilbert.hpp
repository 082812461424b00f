#pragma once

#include "exact/rat.hpp"

#include <vector>

namespace oppairs {

// (a, b)_s = +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over the
// completion at s; computed by the valuation/residue-symbol formulas with a
// separate p = 2 branch. Nonzero arguments required.
int hilbert_symbol(const Rat& a, const Rat& b, const PlaceId& s);

// ∏_{i<j} (d_i, d_j)_s over a diagonalization; empty and singleton products
// are +1. Zero entries rejected.
int hasse_invariant(const std::vector<Rat>& diag, const PlaceId& s);

// whether nonzero x is a square in the completion at s
bool is_square_local(const Rat& x, const PlaceId& s);

}  // namespace oppairs
