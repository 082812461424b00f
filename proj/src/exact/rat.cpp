#include "exact/rat.hpp"

namespace oppairs {

Rat rat_of(long num, long den) {
    return rat_of(Int(num), Int(den));
}

Rat rat_of(const Int& num, const Int& den) {
    if (sgn(den) == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace

Rat parse_rat(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    std::string num = s, den = "1";
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("malformed rational \"" + text + "\"");
    Int n(num), d(den);
    if (sgn(d) == 0) throw std::invalid_argument("zero denominator in \"" + text + "\"");
    if (neg) n = -n;
    return rat_of(n, d);
}

std::string emit_rat(const Rat& x) {
    std::string s = x.get_num().get_str();
    if (x.get_den() != 1) s += "/" + x.get_den().get_str();
    return s;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

bool is_squarefree(const Int& n) {
    if (n < 1) return false;
    Int m = n;
    for (Int f = 2; f * f <= m; ++f) {
        if (m % f == 0) {
            m /= f;
            if (m % f == 0) return false;
        }
    }
    return true;
}

PlaceId PlaceId::finite(long long p) {
    if (p < 2 || !is_prime(int_of(p))) throw std::invalid_argument("place must be a prime >= 2");
    return PlaceId{false, p};
}

std::string place_name(const PlaceId& s) {
    return s.archimedean ? "arch" : std::to_string(s.p);
}

Valuation padic_valuation(const Int& x, long long p) {
    if (p < 2) throw std::invalid_argument("p-adic valuation needs a prime >= 2");
    if (sgn(x) == 0) return Valuation::inf();
    Int m = abs(x);
    long v = 0;
    Int q, r, pp = int_of(p);
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t());
        if (sgn(r) != 0) break;
        m = q;
        ++v;
    }
    return Valuation::of(v);
}

Valuation padic_valuation(const Rat& x, long long p) {
    if (sgn(x) == 0) return Valuation::inf();
    Valuation vn = padic_valuation(Int(x.get_num()), p);
    Valuation vd = padic_valuation(Int(x.get_den()), p);
    return Valuation::of(vn.v - vd.v);
}

Rat padic_abs(const Rat& x, long long p) {
    Valuation val = padic_valuation(x, p);
    if (val.infinite) return Rat(0);
    Int pk = pow_int(p, static_cast<unsigned long>(val.v < 0 ? -val.v : val.v));
    return val.v >= 0 ? rat_of(Int(1), pk) : Rat(pk);
}

Int pow_int(long long base, unsigned long exp) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
    return r;
}

unsigned long floor_log(const Int& n, long long p) {
    if (n < 1 || p < 2) throw std::invalid_argument("floor_log needs n >= 1, p >= 2");
    unsigned long m = 0;
    Int pk = int_of(p);
    while (pk <= n) {
        pk *= static_cast<long>(p);
        ++m;
    }
    return m;
}

Int floor_div(const Int& num, const Int& den) {
    if (sgn(den) == 0) throw std::invalid_argument("floor_div by zero");
    Int q;
    if (sgn(den) > 0)
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    else {
        Int n = -num, d = -den;
        mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    }
    return q;
}

Int floor_rat(const Rat& x) {
    return floor_div(Int(x.get_num()), Int(x.get_den()));
}

Int round_rat(const Rat& x) {
    return floor_rat(x + rat_of(1, 2));
}

}  // namespace oppairs
