#pragma once

#include "exact/ext_real.hpp"
#include "exact/rat.hpp"

#include <optional>
#include <vector>

namespace oppairs {

template <typename K>
using Vec = std::vector<K>;
template <typename K>
using Mat = std::vector<std::vector<K>>;  // row-major, rectangular

template <typename K>
Mat<K> mat_identity(int n) {
    Mat<K> m(n, Vec<K>(n, K(0)));
    for (int i = 0; i < n; ++i) m[i][i] = K(1);
    return m;
}

template <typename K>
Mat<K> mat_transpose(const Mat<K>& a) {
    if (a.empty()) return {};
    Mat<K> t(a[0].size(), Vec<K>(a.size(), K(0)));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

template <typename K>
Mat<K> mat_mul(const Mat<K>& a, const Mat<K>& b) {
    size_t n = a.size(), m = b[0].size(), k = b.size();
    Mat<K> c(n, Vec<K>(m, K(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (is_zero_k(a[i][l])) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] = c[i][j] + a[i][l] * b[l][j];
        }
    return c;
}

template <typename K>
Vec<K> mat_vec(const Mat<K>& a, const Vec<K>& x) {
    Vec<K> y(a.size(), K(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) y[i] = y[i] + a[i][j] * x[j];
    return y;
}

template <typename K>
K dot(const Vec<K>& x, const Vec<K>& y) {
    K s(0);
    for (size_t i = 0; i < x.size(); ++i) s = s + x[i] * y[i];
    return s;
}

template <typename K>
bool vec_is_zero(const Vec<K>& x) {
    for (const auto& v : x)
        if (!is_zero_k(v)) return false;
    return true;
}

// Reduced row echelon form with deterministic pivoting (first row holding a
// nonzero entry in the current column). Returns the rank.
template <typename K>
int rref(Mat<K>& e, std::vector<int>* pivot_cols = nullptr) {
    if (pivot_cols) pivot_cols->clear();
    if (e.empty()) return 0;
    int rows = static_cast<int>(e.size());
    int cols = static_cast<int>(e[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pivot = -1;
        for (int i = r; i < rows; ++i)
            if (!is_zero_k(e[i][c])) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(e[r], e[pivot]);
        K inv = K(1) / e[r][c];
        for (int j = c; j < cols; ++j) e[r][j] = e[r][j] * inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || is_zero_k(e[i][c])) continue;
            K f = e[i][c];
            for (int j = c; j < cols; ++j) e[i][j] = e[i][j] - f * e[r][j];
        }
        if (pivot_cols) pivot_cols->push_back(c);
        ++r;
    }
    return r;
}

// Scale a vector to an integral primitive representative with positive
// leading sign: rational coordinates (or rational components of quadratic
// irrationals) are cleared to integers, divided by their common gcd, and the
// first nonzero coordinate is made positive. Only rational scalings are used,
// so the spanned line is preserved over the base field.
Vec<Rat> canonical_scale(Vec<Rat> v);
Vec<ExtReal> canonical_scale(Vec<ExtReal> v);

// Canonical nullspace basis: one vector per free column, coordinates from the
// rref back-substitution, then canonical_scale. Order follows free columns.
template <typename K>
std::vector<Vec<K>> nullspace(Mat<K> a) {
    if (a.empty()) return {};
    int cols = static_cast<int>(a[0].size());
    std::vector<int> pivots;
    rref(a, &pivots);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<Vec<K>> basis;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec<K> v(cols, K(0));
        v[f] = K(1);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = K(0) - a[r][f];
        basis.push_back(canonical_scale(std::move(v)));
    }
    return basis;
}

// Solve a x = b; returns a particular solution, and optionally the
// homogeneous nullspace basis through hom.
template <typename K>
std::optional<Vec<K>> solve(Mat<K> a, const Vec<K>& b, std::vector<Vec<K>>* hom = nullptr) {
    int rows = static_cast<int>(a.size());
    int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
    Mat<K> aug = a;
    for (int i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    std::vector<int> pivots;
    rref(aug, &pivots);
    for (int i = 0; i < rows; ++i) {
        bool zero_row = true;
        for (int j = 0; j < cols; ++j)
            if (!is_zero_k(aug[i][j])) {
                zero_row = false;
                break;
            }
        if (zero_row && !is_zero_k(aug[i][cols])) return std::nullopt;
    }
    Vec<K> x(cols, K(0));
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] >= cols) return std::nullopt;  // pivot in the rhs column
        x[pivots[r]] = aug[r][cols];
    }
    if (hom) {
        *hom = nullspace(std::move(a));
    }
    return x;
}

template <typename K>
K det(Mat<K> a) {
    int n = static_cast<int>(a.size());
    K d(1);
    for (int c = 0; c < n; ++c) {
        int pivot = -1;
        for (int i = c; i < n; ++i)
            if (!is_zero_k(a[i][c])) {
                pivot = i;
                break;
            }
        if (pivot < 0) return K(0);
        if (pivot != c) {
            std::swap(a[pivot], a[c]);
            d = K(0) - d;
        }
        d = d * a[c][c];
        K inv = K(1) / a[c][c];
        for (int i = c + 1; i < n; ++i) {
            if (is_zero_k(a[i][c])) continue;
            K f = a[i][c] * inv;
            for (int j = c; j < n; ++j) a[i][j] = a[i][j] - f * a[c][j];
        }
    }
    return d;
}

template <typename K>
std::optional<Mat<K>> inverse(const Mat<K>& a) {
    int n = static_cast<int>(a.size());
    Mat<K> aug = a;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i].push_back(i == j ? K(1) : K(0));
    }
    std::vector<int> pivots;
    int rank = rref(aug, &pivots);
    if (rank < n) return std::nullopt;
    Mat<K> inv(n, Vec<K>(n, K(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

// Symmetric congruence diagonalization: returns basis columns b (as a list of
// column vectors) and diagonal entries with Q(b_k) = diag[k]. Zero entries
// mark radical directions. Deterministic; when a diagonal pivot vanishes the
// first column with a nonzero coupling is folded in first.
template <typename K>
void congruent_diagonalize(Mat<K> g, std::vector<Vec<K>>& basis, Vec<K>& diag) {
    int n = static_cast<int>(g.size());
    Mat<K> b = mat_identity<K>(n);  // columns of b track the basis
    auto col_axpy = [&](int dst, int src, const K& f) {
        // column_dst += f * column_src, applied to both g (congruently) and b
        for (int i = 0; i < n; ++i) g[i][dst] = g[i][dst] + f * g[i][src];
        for (int j = 0; j < n; ++j) g[dst][j] = g[dst][j] + f * g[src][j];
        for (int i = 0; i < n; ++i) b[i][dst] = b[i][dst] + f * b[i][src];
    };
    auto col_swap = [&](int k, int l) {
        for (int i = 0; i < n; ++i) std::swap(g[i][k], g[i][l]);
        std::swap(g[k], g[l]);
        for (int i = 0; i < n; ++i) std::swap(b[i][k], b[i][l]);
    };
    for (int k = 0; k < n; ++k) {
        if (is_zero_k(g[k][k])) {
            int l = -1;
            for (int j = k + 1; j < n; ++j)
                if (!is_zero_k(g[k][j])) {
                    l = j;
                    break;
                }
            if (l >= 0) {
                // folding column l in gives pivot 2 g[k][l] + g[l][l]; when
                // that cancels, g[l][l] = -2 g[k][l] != 0 and a swap works
                K folded = g[k][l] + g[k][l] + g[l][l];
                if (!is_zero_k(folded))
                    col_axpy(k, l, K(1));
                else
                    col_swap(k, l);
            }
        }
        if (is_zero_k(g[k][k])) continue;  // row is zero: radical direction
        K inv = K(1) / g[k][k];
        for (int j = k + 1; j < n; ++j) {
            if (is_zero_k(g[k][j])) continue;
            col_axpy(j, k, K(0) - g[k][j] * inv);
        }
    }
    basis.clear();
    diag.assign(n, K(0));
    for (int k = 0; k < n; ++k) {
        Vec<K> col(n, K(0));
        for (int i = 0; i < n; ++i) col[i] = b[i][k];
        basis.push_back(std::move(col));
        diag[k] = g[k][k];
    }
}

}  // namespace oppairs
