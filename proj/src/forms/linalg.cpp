#include "forms/linalg.hpp"

namespace oppairs {

namespace {

// lcm of denominators / gcd of numerators over a list of rationals
void scale_to_primitive(std::vector<Rat*> coords) {
    Int den(1);
    for (Rat* r : coords) {
        Int g;
        mpz_lcm(g.get_mpz_t(), den.get_mpz_t(), r->get_den().get_mpz_t());
        den = g;
    }
    Int num(0);
    for (Rat* r : coords) {
        *r *= Rat(den);
        r->canonicalize();
        Int g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), r->get_num().get_mpz_t());
        num = g;
    }
    if (num == 0) return;
    for (Rat* r : coords) {
        *r /= Rat(num);
        r->canonicalize();
    }
}

}  // namespace

Vec<Rat> canonical_scale(Vec<Rat> v) {
    std::vector<Rat*> coords;
    for (Rat& r : v) coords.push_back(&r);
    scale_to_primitive(coords);
    for (const Rat& r : v) {
        if (r == 0) continue;
        if (r < 0)
            for (Rat& x : v) x = -x;
        break;
    }
    return v;
}

Vec<ExtReal> canonical_scale(Vec<ExtReal> v) {
    std::vector<Rat> parts;
    parts.reserve(2 * v.size());
    for (const ExtReal& x : v) {
        parts.push_back(x.a);
        parts.push_back(x.b);
    }
    std::vector<Rat*> coords;
    for (Rat& r : parts) coords.push_back(&r);
    scale_to_primitive(coords);
    for (size_t i = 0; i < v.size(); ++i) v[i] = ExtReal(parts[2 * i], parts[2 * i + 1], v[i].d);
    for (const ExtReal& x : v) {
        int s = ext_sign(x);
        if (s == 0) continue;
        if (s < 0)
            for (ExtReal& y : v) y = ExtReal(0) - y;
        break;
    }
    return v;
}

}  // namespace oppairs
