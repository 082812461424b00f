#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace oppairs {

// Exact rational scalar. mpq_class keeps gcd(num, den) = 1 and den >= 1
// after every operation; helpers below canonicalize explicitly built values.
using Rat = mpq_class;
using Int = mpz_class;

Rat rat_of(long num, long den = 1);
Rat rat_of(const Int& num, const Int& den);

// gmpxx has no long long constructor; every 64-bit literal funnels through here
inline Int int_of(long long v) { return Int(static_cast<long>(v)); }

// Textual scalar format: "a" or "a/b", reduced, whitespace-free.
Rat parse_rat(const std::string& text);
std::string emit_rat(const Rat& x);

bool is_prime(const Int& n);
bool is_squarefree(const Int& n);

// A place of Q: the archimedean absolute value or a finite prime.
struct PlaceId {
    bool archimedean = true;
    long long p = 0;  // set iff !archimedean

    static PlaceId arch() { return PlaceId{}; }
    static PlaceId finite(long long p);

    bool operator==(const PlaceId&) const = default;
};

std::string place_name(const PlaceId& s);

// p-adic valuation; infinite exactly for 0.
struct Valuation {
    bool infinite = false;
    long v = 0;

    static Valuation of(long v) { return Valuation{false, v}; }
    static Valuation inf() { return Valuation{true, 0}; }

    bool operator==(const Valuation&) const = default;
};

Valuation padic_valuation(const Rat& x, long long p);
Valuation padic_valuation(const Int& x, long long p);

// Normalized absolute value |x|_p = p^{-v_p(x)}, exact; |0|_p = 0.
Rat padic_abs(const Rat& x, long long p);

Int pow_int(long long base, unsigned long exp);

// Largest m >= 0 with p^m <= n; requires n >= 1.
unsigned long floor_log(const Int& n, long long p);

// Exact floor of num/den (works for negative values); den != 0.
Int floor_div(const Int& num, const Int& den);
Int floor_rat(const Rat& x);
// Nearest integer, ties rounded toward +infinity.
Int round_rat(const Rat& x);

inline bool is_zero_k(const Rat& x) { return sgn(x) == 0; }
inline int sign_k(const Rat& x) { return sgn(x); }

}  // namespace oppairs
