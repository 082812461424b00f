#include "local/hilbert.hpp"

#include <stdexcept>

namespace oppairs {

namespace {

// residue of a p-adic unit modulo p^k (num and den both prime to p)
long unit_residue_mod(const Rat& u, long m) {
    Int mm(m);
    Int num = u.get_num() % mm;
    if (num < 0) num += mm;
    Int den = u.get_den() % mm;
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mm.get_mpz_t()) == 0)
        throw std::logic_error("unit_residue_mod: denominator not invertible");
    Int r = (num * inv) % mm;
    return r.get_si();
}

// Legendre symbol of a p-adic unit for odd p
int legendre_unit(const Rat& u, long long p) {
    Int pp = int_of(p);
    int s = mpz_legendre(u.get_num().get_mpz_t(), pp.get_mpz_t());
    s *= mpz_legendre(u.get_den().get_mpz_t(), pp.get_mpz_t());
    return s;
}

// (u - 1)/2 mod 2 for a 2-adic unit
int eps2(const Rat& u) { return unit_residue_mod(u, 4) == 3 ? 1 : 0; }

// (u^2 - 1)/8 mod 2 for a 2-adic unit
int omega2(const Rat& u) {
    long r = unit_residue_mod(u, 8);
    return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, const PlaceId& s) {
    if (sgn(a) == 0 || sgn(b) == 0)
        throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
    if (s.archimedean) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;

    long long p = s.p;
    long alpha = padic_valuation(a, p).v;
    long beta = padic_valuation(b, p).v;
    Rat pa = pow_int(p, static_cast<unsigned long>(alpha < 0 ? -alpha : alpha));
    Rat pb = pow_int(p, static_cast<unsigned long>(beta < 0 ? -beta : beta));
    Rat ua = alpha < 0 ? Rat(a * pa) : Rat(a / pa);  // unit parts
    Rat ub = beta < 0 ? Rat(b * pb) : Rat(b / pb);

    if (p == 2) {
        long e = eps2(ua) * eps2(ub) + alpha * omega2(ub) + beta * omega2(ua);
        return (e % 2 + 2) % 2 == 1 ? -1 : 1;
    }
    int r = 1;
    if ((alpha % 2 + 2) % 2 == 1 && (beta % 2 + 2) % 2 == 1 && ((p - 1) / 2) % 2 == 1)
        r = -r;
    if ((beta % 2 + 2) % 2 == 1) r *= legendre_unit(ua, p);
    if ((alpha % 2 + 2) % 2 == 1) r *= legendre_unit(ub, p);
    return r;
}

int hasse_invariant(const std::vector<Rat>& diag, const PlaceId& s) {
    for (const Rat& d : diag)
        if (sgn(d) == 0) throw std::invalid_argument("hasse_invariant: zero diagonal entry");
    int r = 1;
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) r *= hilbert_symbol(diag[i], diag[j], s);
    return r;
}

bool is_square_local(const Rat& x, const PlaceId& s) {
    if (sgn(x) == 0) throw std::invalid_argument("is_square_local: zero argument");
    if (s.archimedean) return sgn(x) > 0;
    long long p = s.p;
    long v = padic_valuation(x, p).v;
    if ((v % 2 + 2) % 2 == 1) return false;
    Rat pv = pow_int(p, static_cast<unsigned long>(v < 0 ? -v : v));
    Rat u = v < 0 ? Rat(x * pv) : Rat(x / pv);
    if (p == 2) return unit_residue_mod(u, 8) == 1;
    return legendre_unit(u, p) == 1;
}

}  // namespace oppairs
