#pragma once

#include "forms/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace oppairs {

// Quadratic form stored as polynomial coefficients: Q(x) = sum_{i<=j} c[i][j] x_i x_j.
// Entries below the diagonal must stay zero; the Gram matrix is derived on demand.
template <typename K>
struct QuadForm {
    int n = 0;
    Mat<K> c;

    QuadForm() = default;
    explicit QuadForm(int dim) : n(dim), c(dim, Vec<K>(dim, K(0))) {}
};

template <typename K>
struct LinForm {
    int n = 0;
    Vec<K> c;

    LinForm() = default;
    explicit LinForm(Vec<K> coeffs) : n(static_cast<int>(coeffs.size())), c(std::move(coeffs)) {}

    bool is_zero() const { return vec_is_zero(c); }
};

template <typename K>
K eval_quad(const QuadForm<K>& q, const Vec<K>& x) {
    if (static_cast<int>(x.size()) != q.n) throw std::invalid_argument("eval_quad: dimension mismatch");
    K s(0);
    for (int i = 0; i < q.n; ++i) {
        if (is_zero_k(x[i])) continue;
        for (int j = i; j < q.n; ++j) s = s + q.c[i][j] * x[i] * x[j];
    }
    return s;
}

template <typename K>
K eval_lin(const LinForm<K>& l, const Vec<K>& x) {
    if (static_cast<int>(x.size()) != l.n) throw std::invalid_argument("eval_lin: dimension mismatch");
    return dot(l.c, x);
}

template <typename K>
Mat<K> gram(const QuadForm<K>& q) {
    Mat<K> g(q.n, Vec<K>(q.n, K(0)));
    K half = K(1) / K(2);
    for (int i = 0; i < q.n; ++i) {
        g[i][i] = q.c[i][i];
        for (int j = i + 1; j < q.n; ++j) {
            g[i][j] = q.c[i][j] * half;
            g[j][i] = g[i][j];
        }
    }
    return g;
}

template <typename K>
QuadForm<K> quad_from_gram(const Mat<K>& g) {
    QuadForm<K> q(static_cast<int>(g.size()));
    for (int i = 0; i < q.n; ++i) {
        q.c[i][i] = g[i][i];
        for (int j = i + 1; j < q.n; ++j) q.c[i][j] = g[i][j] + g[j][i];
    }
    return q;
}

template <typename K>
K bilinear(const QuadForm<K>& q, const Vec<K>& x, const Vec<K>& y) {
    return dot(x, mat_vec(gram(q), y));
}

// Polynomial gradient: integral whenever the coefficients are (no halves).
// Q(x + y) = Q(x) + grad(x)·y + Q(y) exactly.
template <typename K>
Vec<K> quad_grad(const QuadForm<K>& q, const Vec<K>& x) {
    Vec<K> g(q.n, K(0));
    for (int i = 0; i < q.n; ++i) {
        g[i] = K(2) * q.c[i][i] * x[i];
        for (int j = 0; j < i; ++j) g[i] = g[i] + q.c[j][i] * x[j];
        for (int j = i + 1; j < q.n; ++j) g[i] = g[i] + q.c[i][j] * x[j];
    }
    return g;
}

// The quadratic form L(x)^2, for pencil combinations u*Q + v*L^2.
template <typename K>
QuadForm<K> square_of_linear(const LinForm<K>& l) {
    QuadForm<K> q(l.n);
    for (int i = 0; i < l.n; ++i) {
        q.c[i][i] = l.c[i] * l.c[i];
        for (int j = i + 1; j < l.n; ++j) q.c[i][j] = K(2) * l.c[i] * l.c[j];
    }
    return q;
}

template <typename K>
QuadForm<K> quad_scale(const QuadForm<K>& q, const K& t) {
    QuadForm<K> r = q;
    for (auto& row : r.c)
        for (auto& v : row) v = v * t;
    return r;
}

template <typename K>
QuadForm<K> quad_add(const QuadForm<K>& a, const QuadForm<K>& b) {
    QuadForm<K> r = a;
    for (int i = 0; i < r.n; ++i)
        for (int j = i; j < r.n; ++j) r.c[i][j] = r.c[i][j] + b.c[i][j];
    return r;
}

template <typename K>
bool quad_is_zero(const QuadForm<K>& q) {
    for (const auto& row : q.c)
        if (!vec_is_zero(row)) return false;
    return true;
}

// Basis of the hyperplane {L = 0}: pivot on the first nonzero coefficient,
// one canonical vector per remaining coordinate, in coordinate order.
template <typename K>
std::vector<Vec<K>> kernel_basis(const LinForm<K>& l) {
    if (l.is_zero()) throw std::invalid_argument("kernel_basis: zero form");
    int pivot = 0;
    while (is_zero_k(l.c[pivot])) ++pivot;
    std::vector<Vec<K>> basis;
    for (int i = 0; i < l.n; ++i) {
        if (i == pivot) continue;
        Vec<K> v(l.n, K(0));
        v[i] = K(1);
        v[pivot] = K(0) - l.c[i] / l.c[pivot];
        basis.push_back(canonical_scale(std::move(v)));
    }
    return basis;
}

// Q restricted to the span of the basis vectors, as a form in dim = #basis.
template <typename K>
QuadForm<K> restrict_quad(const QuadForm<K>& q, const std::vector<Vec<K>>& basis) {
    int m = static_cast<int>(basis.size());
    Mat<K> b(q.n, Vec<K>(m, K(0)));
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < q.n; ++i) b[i][k] = basis[k][i];
    {
        Mat<K> check = mat_transpose(b);
        if (rref(check) < m) throw std::invalid_argument("restrict_quad: dependent basis");
    }
    return quad_from_gram(mat_mul(mat_transpose(b), mat_mul(gram(q), b)));
}

// Q composed with the substitution x = g.y (columns of g are the new basis).
template <typename K>
QuadForm<K> quad_compose(const QuadForm<K>& q, const Mat<K>& g) {
    return quad_from_gram(mat_mul(mat_transpose(g), mat_mul(gram(q), g)));
}

template <typename K>
LinForm<K> lin_compose(const LinForm<K>& l, const Mat<K>& g) {
    LinForm<K> r;
    r.n = static_cast<int>(g[0].size());
    r.c.assign(r.n, K(0));
    for (int j = 0; j < r.n; ++j)
        for (int i = 0; i < l.n; ++i) r.c[j] = r.c[j] + l.c[i] * g[i][j];
    return r;
}

template <typename K>
std::vector<Vec<K>> radical(const QuadForm<K>& q) {
    return nullspace(gram(q));
}

template <typename K>
bool is_nondegenerate(const QuadForm<K>& q) {
    return !is_zero_k(det(gram(q)));
}

// Exact congruence diagonalization of a nondegenerate form. Basis vectors are
// rescaled to integral primitive representatives; diagonal entries are the
// values Q(b_k) after rescaling, all nonzero.
template <typename K>
void diagonalize(const QuadForm<K>& q, std::vector<Vec<K>>& basis, Vec<K>& diag) {
    if (!is_nondegenerate(q)) throw std::invalid_argument("diagonalize: degenerate form");
    congruent_diagonalize(gram(q), basis, diag);
    for (int k = 0; k < q.n; ++k) {
        basis[k] = canonical_scale(std::move(basis[k]));
        diag[k] = eval_quad(q, basis[k]);
    }
}

// x1 x2 + a3 x3^2 + a4 x4^2, with L = x4, reached through the basis change g.
template <typename K>
struct NormalForm {
    Mat<K> g;
    K a3 = K(0);
    K a4 = K(0);
};

// Deterministic bounded search for a nonzero integer vector with
// Q(x) = L(x) = 0, by increasing sup-norm. Returns the canonical
// representative of the first hit.
template <typename K>
std::optional<Vec<K>> integer_isotropic_in_kernel(const QuadForm<K>& q, const LinForm<K>& l,
                                                  int height = 8) {
    int n = q.n;
    for (int h = 1; h <= height; ++h) {
        std::vector<long> x(n, -h);
        while (true) {
            long m = 0;
            for (long v : x) m = std::max(m, std::abs(v));
            if (m == h) {  // new shell only
                Vec<K> v(n, K(0));
                for (int i = 0; i < n; ++i) v[i] = K(static_cast<int>(x[i]));
                if (is_zero_k(eval_lin(l, v)) && is_zero_k(eval_quad(q, v)))
                    return canonical_scale(std::move(v));
            }
            int i = n - 1;
            while (i >= 0 && x[i] == h) x[i--] = -h;
            if (i < 0) break;
            ++x[i];
        }
    }
    return std::nullopt;
}

// Change of basis taking (Q, L) to x1 x2 + a3 x3^2 + a4 x4^2 with L = x4.
// Needs an isotropic vector of Q restricted to {L = 0}; one may be supplied
// (in ambient coordinates), otherwise a bounded integer search runs. Returns
// nothing when no such vector is found over the coefficient field.
template <typename K>
std::optional<NormalForm<K>> normal_form_pair(const QuadForm<K>& q, const LinForm<K>& l,
                                              const Vec<K>* isotropic = nullptr) {
    if (q.n != 4) throw std::invalid_argument("normal_form_pair: dimension must be 4");
    if (!is_nondegenerate(q)) throw std::invalid_argument("normal_form_pair: degenerate form");
    auto kb = kernel_basis(l);
    if (!is_nondegenerate(restrict_quad(q, kb)))
        throw std::invalid_argument("normal_form_pair: restriction degenerate");
    Vec<K> w1;
    if (isotropic) {
        w1 = *isotropic;
        if (vec_is_zero(w1) || !is_zero_k(eval_lin(l, w1)) || !is_zero_k(eval_quad(q, w1)))
            throw std::invalid_argument("normal_form_pair: supplied vector is not isotropic in the kernel");
    } else {
        auto found = integer_isotropic_in_kernel(q, l);
        if (!found) return std::nullopt;
        w1 = *found;
    }
    Mat<K> g = gram(q);
    auto bil = [&](const Vec<K>& x, const Vec<K>& y) { return dot(x, mat_vec(g, y)); };
    // hyperbolic partner inside {L = 0}
    Vec<K> u;
    for (const auto& v : kb) {
        if (!is_zero_k(bil(w1, v))) {
            u = v;
            break;
        }
    }
    if (u.empty()) throw std::logic_error("normal_form_pair: isotropic vector is radical in the kernel");
    K bw = bil(w1, u);
    K alpha = K(1) / (K(2) * bw);
    K beta = K(0) - alpha * eval_quad(q, u) / (K(2) * bw);
    Vec<K> w2(4, K(0));
    for (int i = 0; i < 4; ++i) w2[i] = alpha * u[i] + beta * w1[i];
    // w3 spans {L = 0} ∩ w1⊥ ∩ w2⊥; w4 is the unique Q-orthogonal lift with L = 1
    Mat<K> rows3 = {l.c, mat_vec(g, w1), mat_vec(g, w2)};
    auto ns = nullspace(rows3);
    if (ns.size() != 1) throw std::logic_error("normal_form_pair: orthogonal line not unique");
    Vec<K> w3 = ns[0];
    Mat<K> rows4 = {l.c, mat_vec(g, w1), mat_vec(g, w2), mat_vec(g, w3)};
    auto w4 = solve(rows4, Vec<K>{K(1), K(0), K(0), K(0)});
    if (!w4) throw std::logic_error("normal_form_pair: no orthogonal lift");
    NormalForm<K> nf;
    nf.g = Mat<K>(4, Vec<K>(4, K(0)));
    for (int i = 0; i < 4; ++i) {
        nf.g[i][0] = w1[i];
        nf.g[i][1] = w2[i];
        nf.g[i][2] = w3[i];
        nf.g[i][3] = (*w4)[i];
    }
    nf.a3 = eval_quad(q, w3);
    nf.a4 = eval_quad(q, *w4);
    return nf;
}

}  // namespace oppairs
