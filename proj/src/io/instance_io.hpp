#pragma once

#include "forms/instance.hpp"

#include <string>

namespace oppairs {

// Instance documents are JSON with a fixed schema:
//
//   {
//     "label": "i1",                  // optional
//     "n": 4,
//     "d": 2,
//     "places": [5],
//     "forms": {
//       "arch": {"q": [[...],...], "l": [...]},
//       "5":    {"q": [[...],...], "l": [...]}
//     }
//   }
//
// "q" holds the upper-triangular polynomial coefficients as n rows of
// lengths n, n-1, ..., 1 (row i lists the coefficients of x_i*x_j for
// j >= i); "l" lists n coefficients. Entries are strings in the textual
// coefficient formats ("p/q" rationals at finite places, "a+b*sqrt(d)"
// at the real place) or plain JSON integers. Syntax errors carry byte
// positions; semantic errors list every violation with its JSON path.
PairInstance parse_instance(const std::string& text);

// canonical emission: fixed key order, places ascending, canonical
// rational strings; parse(emit_instance(inst)) reproduces inst exactly
std::string emit_instance(const PairInstance& inst);

// FNV-1a 64-bit digest of the canonical emission, 16 hex characters
std::string instance_digest(const PairInstance& inst);

}  // namespace oppairs
