#pragma once

#include "exact/rat.hpp"

#include <optional>

namespace oppairs {

/**
 * Element a + b*sqrt(d) of a real quadratic extension of Q, stored exactly.
 *
 * Values with b == 0 carry d == 0 and mix freely with any extension; two
 * values with nonzero irrational parts must agree on d. A nonzero d is a
 * squarefree integer >= 2 (validated where values enter the system), which
 * makes sqrt(d) irrational and every sign decision below exact.
 */
struct ExtReal {
    Rat a;
    Rat b;
    long long d = 0;

    ExtReal() = default;
    ExtReal(long v) : a(v) {}          // NOLINT: implicit rational embedding
    ExtReal(int v) : a(v) {}           // NOLINT
    ExtReal(Rat v) : a(std::move(v)) {}  // NOLINT
    ExtReal(Rat a_, Rat b_, long long d_);

    bool is_rational() const { return sgn(b) == 0; }

    bool operator==(const ExtReal&) const = default;
};

void validate_ext_d(long long d);

ExtReal operator-(const ExtReal& x);
ExtReal operator+(const ExtReal& x, const ExtReal& y);
ExtReal operator-(const ExtReal& x, const ExtReal& y);
ExtReal operator*(const ExtReal& x, const ExtReal& y);
ExtReal ext_inv(const ExtReal& x);
ExtReal operator/(const ExtReal& x, const ExtReal& y);

// Exact sign in the real embedding (sqrt(d) > 0): -1, 0, or +1.
int ext_sign(const ExtReal& x);

// |x| < eps, decided exactly: sign(x + eps) > 0 and sign(x - eps) < 0.
bool ext_abs_lt(const ExtReal& x, const ExtReal& eps);

ExtReal ext_abs(const ExtReal& x);

// Exact floor in the real embedding.
Int ext_floor(const ExtReal& x);

// Floating approximation at the given bit precision (for heuristics only).
mpf_class ext_approx(const ExtReal& x, unsigned long prec_bits = 128);

/**
 * Textual coefficient format. Canonical emissions:
 *   "a", "a/b"                    rational values
 *   "a+c*sqrt(d)", "a-c*sqrt(d)"  with a, c in the rational format, c > 0
 * The parser additionally accepts a missing rational part ("c*sqrt(d)",
 * "-sqrt(d)") and a bare "sqrt(d)". expect_d, when set, rejects any other
 * extension; parse of a pure rational never consults it.
 */
ExtReal parse_ext(const std::string& text, std::optional<long long> expect_d = std::nullopt);
std::string emit_ext(const ExtReal& x);

inline bool is_zero_k(const ExtReal& x) { return sgn(x.a) == 0 && sgn(x.b) == 0; }
inline int sign_k(const ExtReal& x) { return ext_sign(x); }

}  // namespace oppairs
