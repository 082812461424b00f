#include "local/isotropy.hpp"

#include "local/hilbert.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace oppairs {

namespace {

template <class K>
Signature signature_impl(const QuadForm<K>& q) {
    std::vector<Vec<K>> basis;
    Vec<K> diag;
    congruent_diagonalize(gram(q), basis, diag);
    Signature s;
    for (const K& d : diag) {
        int sg = sign_k(d);
        if (sg > 0)
            ++s.pos;
        else if (sg < 0)
            ++s.neg;
        else
            ++s.zero;
    }
    return s;
}

// shell-ordered search for an integer zero of q; returns the canonical
// primitive representative of the first hit
template <class K>
std::optional<Vec<Rat>> small_rational_zero(const QuadForm<K>& q, int height) {
    int n = q.n;
    std::vector<long> x(n, 0);
    for (int h = 1; h <= height; ++h) {
        std::fill(x.begin(), x.end(), -static_cast<long>(h));
        while (true) {
            long m = 0;
            for (long xi : x) m = std::max(m, std::labs(xi));
            if (m == h) {  // new shell only
                Vec<K> v(n);
                for (int i = 0; i < n; ++i) v[i] = K(static_cast<int>(x[i]));
                if (is_zero_k(eval_quad(q, v))) {
                    Vec<Rat> r(n);
                    for (int i = 0; i < n; ++i) r[i] = Rat(static_cast<int>(x[i]));
                    return canonical_scale(r);
                }
            }
            int k = 0;
            while (k < n && x[k] == h) { x[k] = -static_cast<long>(h); ++k; }
            if (k == n) break;
            ++x[k];
        }
    }
    return std::nullopt;
}

// multiply q by a power of p so coefficients are p-integral with a unit one
QuadForm<Rat> p_primitive_scale(const QuadForm<Rat>& q, long long p) {
    long c = 0;
    bool any = false;
    for (int i = 0; i < q.n; ++i)
        for (int j = i; j < q.n; ++j) {
            if (sgn(q.c[i][j]) == 0) continue;
            long v = padic_valuation(q.c[i][j], p).v;
            if (!any || v < c) c = v;
            any = true;
        }
    if (!any || c == 0) return q;
    Rat f = pow_int(p, static_cast<unsigned long>(c < 0 ? -c : c));
    if (c > 0) f = Rat(1) / f;
    return quad_scale(q, f);
}

constexpr long long kAnisotropyCrossCheckMaxP = 23;

}  // namespace

Signature signature(const QuadForm<ExtReal>& q) { return signature_impl(q); }
Signature signature(const QuadForm<Rat>& q) { return signature_impl(q); }

IsotropyVerdict is_isotropic_arch(const QuadForm<ExtReal>& q) {
    if (!is_nondegenerate(q)) throw std::invalid_argument("is_isotropic_arch: degenerate form");
    Signature s = signature(q);
    IsotropyVerdict v;
    v.isotropic = s.pos > 0 && s.neg > 0;
    std::ostringstream os;
    os << "signature (" << s.pos << "," << s.neg << ")";
    v.criterion = os.str();
    if (v.isotropic) v.exact_vector = small_rational_zero(q, 4);
    return v;
}

IsotropyVerdict is_isotropic_finite(const QuadForm<Rat>& q, long long p) {
    if (!is_prime(int_of(p))) throw std::invalid_argument("is_isotropic_finite: p not prime");
    if (!is_nondegenerate(q)) throw std::invalid_argument("is_isotropic_finite: degenerate form");
    PlaceId s = PlaceId::finite(p);

    std::vector<Vec<Rat>> basis;
    Vec<Rat> diag;
    diagonalize(q, basis, diag);
    std::vector<Rat> d(diag.begin(), diag.end());
    int n = q.n;

    IsotropyVerdict v;
    std::ostringstream os;
    if (n <= 1) {
        v.isotropic = false;
        os << "dim " << n << ": anisotropic";
    } else if (n == 2) {
        Rat m = -d[0] * d[1];
        v.isotropic = is_square_local(m, s);
        os << "dim 2: -d1*d2 = " << emit_rat(m) << (v.isotropic ? " is" : " is not") << " a square at " << p;
    } else if (n == 3) {
        Rat disc = d[0] * d[1] * d[2];
        int eps = hasse_invariant(d, s);
        int ref = hilbert_symbol(Rat(-1), Rat(-1) * disc, s);
        v.isotropic = eps == ref;
        os << "dim 3: hasse = " << eps << ", (-1,-disc)_" << p << " = " << ref;
    } else if (n == 4) {
        Rat disc = d[0] * d[1] * d[2] * d[3];
        if (!is_square_local(disc, s)) {
            v.isotropic = true;
            os << "dim 4: disc = " << emit_rat(disc) << " not a square at " << p;
        } else {
            int eps = hasse_invariant(d, s);
            int ref = hilbert_symbol(Rat(-1), Rat(-1), s);
            v.isotropic = eps == ref;
            os << "dim 4: disc square; hasse = " << eps << ", (-1,-1)_" << p << " = " << ref;
        }
    } else {
        v.isotropic = true;
        os << "dim " << n << " >= 5: always isotropic over Q_" << p;
    }
    v.criterion = os.str();

    QuadForm<Rat> qs = p_primitive_scale(q, p);
    Rat det2 = det(Mat<Rat>(gram(quad_scale(qs, Rat(2)))));
    long vdet = padic_valuation(det2, p).v;
    int kmax = static_cast<int>(std::max<long>(8, 3 * vdet + 2));

    if (v.isotropic) {
        v.exact_vector = small_rational_zero(q, 4);
        v.hensel = smooth_local_zero(qs, p, kmax);
        if (!v.hensel)
            throw std::logic_error("is_isotropic_finite: criterion isotropic at " + std::to_string(p) +
                                   " but certificate search found no local zero [" + v.criterion + "]");
    } else if (p <= kAnisotropyCrossCheckMaxP) {
        // belt-and-suspenders: the certificate search must come back empty
        if (smooth_local_zero(qs, p, kmax))
            throw std::logic_error("is_isotropic_finite: criterion anisotropic at " + std::to_string(p) +
                                   " but certificate search found a local zero [" + v.criterion + "]");
    }
    return v;
}

IsotropyVerdict is_isotropic_local(const QuadForm<Rat>& q, const PlaceId& s) {
    if (!s.archimedean) return is_isotropic_finite(q, s.p);
    QuadForm<ExtReal> qe(q.n);
    for (int i = 0; i < q.n; ++i)
        for (int j = i; j < q.n; ++j) qe.c[i][j] = ExtReal(q.c[i][j]);
    return is_isotropic_arch(qe);
}

}  // namespace oppairs
