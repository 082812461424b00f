#include "exact/ext_real.hpp"

#include <vector>

namespace oppairs {

namespace {

// Shared extension index for two operands; 0 mixes with anything.
long long merge_d(const ExtReal& x, const ExtReal& y) {
    long long dx = sgn(x.b) == 0 ? 0 : x.d;
    long long dy = sgn(y.b) == 0 ? 0 : y.d;
    if (dx == 0) return dy;
    if (dy == 0 || dx == dy) return dx;
    throw std::invalid_argument("mixed quadratic extensions: sqrt(" + std::to_string(dx) +
                                ") vs sqrt(" + std::to_string(dy) + ")");
}

ExtReal make(Rat a, Rat b, long long d) {
    ExtReal r;
    r.a = std::move(a);
    r.b = std::move(b);
    r.d = sgn(r.b) == 0 ? 0 : d;
    return r;
}

}  // namespace

void validate_ext_d(long long d) {
    if (d < 2) throw std::invalid_argument("extension index d must be >= 2");
    Int n = int_of(d);
    if (!is_squarefree(n)) throw std::invalid_argument("extension index d must be squarefree");
    Int root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    if (root * root == n) throw std::invalid_argument("extension index d must not be a square");
}

ExtReal::ExtReal(Rat a_, Rat b_, long long d_) : a(std::move(a_)), b(std::move(b_)), d(d_) {
    if (sgn(b) == 0) {
        d = 0;
    } else {
        validate_ext_d(d);
    }
}

ExtReal operator-(const ExtReal& x) {
    return make(-x.a, -x.b, x.d);
}

ExtReal operator+(const ExtReal& x, const ExtReal& y) {
    long long d = merge_d(x, y);
    return make(x.a + y.a, x.b + y.b, d);
}

ExtReal operator-(const ExtReal& x, const ExtReal& y) {
    long long d = merge_d(x, y);
    return make(x.a - y.a, x.b - y.b, d);
}

ExtReal operator*(const ExtReal& x, const ExtReal& y) {
    long long d = merge_d(x, y);
    Rat a = x.a * y.a + x.b * y.b * Rat(int_of(d));
    Rat b = x.a * y.b + x.b * y.a;
    return make(std::move(a), std::move(b), d);
}

ExtReal ext_inv(const ExtReal& x) {
    if (is_zero_k(x)) throw std::domain_error("inverse of zero");
    // 1/(a + b sqrt(d)) = (a - b sqrt(d)) / (a^2 - b^2 d); the norm cannot
    // vanish for a nonzero element since sqrt(d) is irrational.
    Rat norm = x.a * x.a - x.b * x.b * Rat(int_of(x.d));
    return make(x.a / norm, -x.b / norm, x.d);
}

ExtReal operator/(const ExtReal& x, const ExtReal& y) {
    return x * ext_inv(y);
}

int ext_sign(const ExtReal& x) {
    int sa = sgn(x.a), sb = sgn(x.b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: |a| vs |b| sqrt(d) decided by squaring.
    int cmp_sq = cmp(x.a * x.a, x.b * x.b * Rat(int_of(x.d)));
    if (cmp_sq == 0)
        throw std::logic_error("a^2 == b^2 d with b != 0: d is not squarefree/non-square");
    return cmp_sq > 0 ? sa : sb;
}

bool ext_abs_lt(const ExtReal& x, const ExtReal& eps) {
    return ext_sign(x + eps) > 0 && ext_sign(x - eps) < 0;
}

ExtReal ext_abs(const ExtReal& x) {
    return ext_sign(x) < 0 ? -x : x;
}

Int ext_floor(const ExtReal& x) {
    if (x.is_rational()) return floor_rat(x.a);
    // Approximate, then fix up with exact sign comparisons.
    mpf_class f = ext_approx(x, 192);
    mpf_class fl;
    mpf_floor(fl.get_mpf_t(), f.get_mpf_t());
    Int k;
    mpz_set_f(k.get_mpz_t(), fl.get_mpf_t());
    while (ext_sign(x - ExtReal(Rat(k))) < 0) --k;
    while (ext_sign(x - ExtReal(Rat(k + 1))) >= 0) ++k;
    return k;
}

mpf_class ext_approx(const ExtReal& x, unsigned long prec_bits) {
    mpf_class a(0, prec_bits), b(0, prec_bits), rd(0, prec_bits);
    mpf_set_q(a.get_mpf_t(), x.a.get_mpq_t());
    mpf_set_q(b.get_mpf_t(), x.b.get_mpq_t());
    if (sgn(x.b) == 0) return a;
    mpf_set_z(rd.get_mpf_t(), int_of(x.d).get_mpz_t());
    mpf_sqrt(rd.get_mpf_t(), rd.get_mpf_t());
    return a + b * rd;
}

namespace {

// One term of the coefficient grammar: either rational or rational*sqrt(d).
struct Term {
    Rat coeff;
    std::optional<long long> d;
};

Term parse_term(const std::string& t) {
    auto s = t.find("sqrt(");
    if (s == std::string::npos) return Term{parse_rat(t), std::nullopt};
    if (t.back() != ')') throw std::invalid_argument("malformed sqrt term \"" + t + "\"");
    std::string inner = t.substr(s + 5, t.size() - s - 6);
    Rat dval = parse_rat(inner);
    if (dval.get_den() != 1UL || sgn(dval) <= 0 || !dval.get_num().fits_slong_p())
        throw std::invalid_argument("sqrt index must be a positive integer in \"" + t + "\"");
    long long d = dval.get_num().get_si();

    std::string head = t.substr(0, s);
    Rat coeff(1);
    if (head == "" || head == "+") {
        coeff = 1;
    } else if (head == "-") {
        coeff = -1;
    } else {
        if (head.back() != '*')
            throw std::invalid_argument("expected '*' before sqrt in \"" + t + "\"");
        coeff = parse_rat(head.substr(0, head.size() - 1));
    }
    return Term{coeff, d};
}

}  // namespace

ExtReal parse_ext(const std::string& text, std::optional<long long> expect_d) {
    if (text.empty()) throw std::invalid_argument("empty coefficient");
    // Split into at most two top-level terms on '+'/'-' (not inside sqrt()).
    std::vector<std::string> terms;
    size_t start = 0;
    int depth = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == '+' || c == '-') && depth == 0 && i > start) {
            terms.push_back(text.substr(start, i - start));
            start = i;  // sign stays with the next term
        }
    }
    terms.push_back(text.substr(start));
    if (terms.size() > 2) throw std::invalid_argument("too many terms in \"" + text + "\"");

    Rat a(0), b(0);
    std::optional<long long> d;
    for (const auto& ts : terms) {
        Term term = parse_term(ts);
        if (term.d) {
            if (d) throw std::invalid_argument("two sqrt terms in \"" + text + "\"");
            d = term.d;
            b = term.coeff;
        } else {
            a += term.coeff;  // a second rational term cannot occur (two terms max)
        }
    }
    if (d && sgn(b) != 0) {
        validate_ext_d(*d);
        if (expect_d && *expect_d != *d)
            throw std::invalid_argument("coefficient uses sqrt(" + std::to_string(*d) +
                                        ") but the instance extension is sqrt(" +
                                        std::to_string(*expect_d) + ")");
        return ExtReal(a, b, *d);
    }
    return ExtReal(a);
}

std::string emit_ext(const ExtReal& x) {
    if (x.is_rational()) return emit_rat(x.a);
    std::string s = emit_rat(x.a);
    s += sgn(x.b) > 0 ? "+" : "-";
    s += emit_rat(abs(x.b));
    s += "*sqrt(" + std::to_string(x.d) + ")";
    return s;
}

}  // namespace oppairs
