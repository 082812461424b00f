#include "local/pencil.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace oppairs {

namespace {

Vec<Rat> quad_to_vec(const QuadForm<Rat>& q) {
    Vec<Rat> v;
    v.reserve(static_cast<size_t>(q.n) * (q.n + 1) / 2);
    for (int i = 0; i < q.n; ++i)
        for (int j = i; j < q.n; ++j) v.push_back(q.c[i][j]);
    return v;
}

QuadForm<Rat> vec_to_quad(const Vec<Rat>& v, int n) {
    QuadForm<Rat> q(n);
    size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) q.c[i][j] = v[k++];
    return q;
}

// coefficient-wise rational/irrational split of an ExtReal form
void split_quad(const QuadForm<ExtReal>& q, QuadForm<Rat>& q0, QuadForm<Rat>& q1) {
    q0 = QuadForm<Rat>(q.n);
    q1 = QuadForm<Rat>(q.n);
    for (int i = 0; i < q.n; ++i)
        for (int j = i; j < q.n; ++j) {
            q0.c[i][j] = q.c[i][j].a;
            q1.c[i][j] = q.c[i][j].b;
        }
}

bool all_rational(const QuadForm<ExtReal>& q, const LinForm<ExtReal>& l) {
    for (int i = 0; i < q.n; ++i)
        for (int j = i; j < q.n; ++j)
            if (sgn(q.c[i][j].b) != 0) return false;
    for (const ExtReal& c : l.c)
        if (sgn(c.b) != 0) return false;
    return true;
}

// one place's locus data: solutions live in Q^m, M maps a solution to the
// rational form it produces, A/B pick out the alpha/beta coordinates
struct PlacePencil {
    PlaceId place;
    Mat<Rat> M;
    Mat<Rat> A;
    Mat<Rat> B;
    bool everything = false;
    std::vector<std::pair<ExtReal, ExtReal>> locus;
    std::vector<Vec<Rat>> null_m;  // kernel of M, cached
    bool alpha_free = false;       // some kernel direction has alpha != 0
    bool beta_free = false;
};

Mat<Rat> columns_to_matrix(const std::vector<Vec<Rat>>& cols, size_t rows) {
    Mat<Rat> m(rows, Vec<Rat>(cols.size(), Rat(0)));
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < rows; ++i) m[i][j] = cols[j][i];
    return m;
}

// pencil built directly over the rationals: solutions are (alpha, beta)
PlacePencil rational_place(const PlaceId& id, const QuadForm<Rat>& q, const QuadForm<Rat>& lsq) {
    PlacePencil pp;
    pp.place = id;
    pp.M = columns_to_matrix({quad_to_vec(q), quad_to_vec(lsq)}, quad_to_vec(q).size());
    pp.A = {{Rat(1), Rat(0)}};
    pp.B = {{Rat(0), Rat(1)}};
    pp.everything = true;
    pp.locus = {{ExtReal(1), ExtReal(0)}, {ExtReal(0), ExtReal(1)}};
    return pp;
}

// pencil over Q(sqrt(d)): coordinates (u0, u1, v0, v1) for
// alpha = u0 + u1 sqrt(d), beta = v0 + v1 sqrt(d); the locus is the kernel of
// the irrational-part system, and M is the rational part on that kernel
PlacePencil ext_place(const QuadForm<ExtReal>& q, const LinForm<ExtReal>& l, long long d) {
    QuadForm<Rat> q0, q1, l0, l1;
    split_quad(q, q0, q1);
    split_quad(square_of_linear(l), l0, l1);
    Vec<Rat> vq0 = quad_to_vec(q0), vq1 = quad_to_vec(q1);
    Vec<Rat> vl0 = quad_to_vec(l0), vl1 = quad_to_vec(l1);
    size_t nn = vq0.size();

    Mat<Rat> constraint = columns_to_matrix({vq1, vq0, vl1, vl0}, nn);
    std::vector<Vec<Rat>> kern = nullspace(constraint);

    Rat rd(int_of(d));
    std::vector<Vec<Rat>> img;
    PlacePencil pp;
    pp.place = PlaceId::arch();
    for (const Vec<Rat>& k : kern) {
        Vec<Rat> w(nn, Rat(0));
        for (size_t i = 0; i < nn; ++i)
            w[i] = k[0] * vq0[i] + rd * k[1] * vq1[i] + k[2] * vl0[i] + rd * k[3] * vl1[i];
        img.push_back(std::move(w));
        pp.locus.emplace_back(ExtReal(k[0], k[1], d), ExtReal(k[2], k[3], d));
    }
    pp.M = columns_to_matrix(img, nn);
    pp.A = Mat<Rat>(2, Vec<Rat>(kern.size(), Rat(0)));
    pp.B = Mat<Rat>(2, Vec<Rat>(kern.size(), Rat(0)));
    for (size_t j = 0; j < kern.size(); ++j) {
        pp.A[0][j] = kern[j][0];
        pp.A[1][j] = kern[j][1];
        pp.B[0][j] = kern[j][2];
        pp.B[1][j] = kern[j][3];
    }
    pp.everything = kern.size() == 4;
    return pp;
}

std::vector<Vec<Rat>> column_space_basis(const Mat<Rat>& m) {
    if (m.empty() || m[0].empty()) return {};
    Mat<Rat> t = mat_transpose(m);
    rref(t);
    std::vector<Vec<Rat>> basis;
    for (const Vec<Rat>& row : t)
        if (!vec_is_zero(row)) basis.push_back(canonical_scale(row));
    return basis;
}

std::vector<Vec<Rat>> intersect_spans(const std::vector<Vec<Rat>>& u, const std::vector<Vec<Rat>>& v) {
    if (u.empty() || v.empty()) return {};
    size_t nn = u[0].size();
    std::vector<Vec<Rat>> cols;
    for (const Vec<Rat>& x : u) cols.push_back(x);
    for (const Vec<Rat>& x : v) {
        Vec<Rat> neg(nn);
        for (size_t i = 0; i < nn; ++i) neg[i] = -x[i];
        cols.push_back(std::move(neg));
    }
    Mat<Rat> d = columns_to_matrix(cols, nn);
    std::vector<Vec<Rat>> kern = nullspace(d);
    Mat<Rat> rows;
    for (const Vec<Rat>& k : kern) {
        Vec<Rat> w(nn, Rat(0));
        for (size_t j = 0; j < u.size(); ++j)
            for (size_t i = 0; i < nn; ++i) w[i] += k[j] * u[j][i];
        if (!vec_is_zero(w)) rows.push_back(std::move(w));
    }
    rref(rows);
    std::vector<Vec<Rat>> basis;
    for (const Vec<Rat>& row : rows)
        if (!vec_is_zero(row)) basis.push_back(canonical_scale(row));
    return basis;
}

bool rows_all_zero(const Mat<Rat>& f, const Vec<Rat>& x) {
    for (const Vec<Rat>& row : f)
        if (sgn(dot(row, x)) != 0) return false;
    return true;
}

// whether w (known to lie in the place's W_s) is reachable with alpha != 0;
// same with beta for the stricter reading
bool reachable_nonzero(const PlacePencil& pp, const Mat<Rat>& f, bool free_dir, const Vec<Rat>& w) {
    if (free_dir) return true;
    std::optional<Vec<Rat>> x = solve(pp.M, w);
    if (!x) throw std::logic_error("pencil: candidate escaped the place locus");
    return !rows_all_zero(f, *x);
}

}  // namespace

PencilReport pencil_rationality(const PairInstance& inst) {
    PencilReport rep;
    std::vector<PlacePencil> pls;

    QuadForm<Rat> q0a, q1a;
    split_quad(inst.q_arch, q0a, q1a);
    bool arch_rational = all_rational(inst.q_arch, inst.l_arch);
    if (arch_rational) {
        LinForm<Rat> l0(Vec<Rat>(inst.n, Rat(0)));
        for (int i = 0; i < inst.n; ++i) l0.c[i] = inst.l_arch.c[i].a;
        pls.push_back(rational_place(PlaceId::arch(), q0a, square_of_linear(l0)));
    } else {
        pls.push_back(ext_place(inst.q_arch, inst.l_arch, inst.d));
    }
    for (const FinitePlacePair& fp : inst.finite)
        pls.push_back(rational_place(PlaceId::finite(fp.p), fp.q, square_of_linear(fp.l)));

    // cache kernels and the free directions
    for (PlacePencil& pp : pls) {
        pp.null_m = nullspace(pp.M);
        for (const Vec<Rat>& z : pp.null_m) {
            if (!rows_all_zero(pp.A, z)) pp.alpha_free = true;
            if (!rows_all_zero(pp.B, z)) pp.beta_free = true;
        }
    }

    // global intersection of the attainable rational forms
    std::vector<Vec<Rat>> w = column_space_basis(pls[0].M);
    for (size_t i = 1; i < pls.size() && !w.empty(); ++i)
        w = intersect_spans(w, column_space_basis(pls[i].M));
    rep.common_dim = static_cast<int>(w.size());

    // per-place admissibility over the intersection
    std::vector<bool> alpha_blocked(pls.size(), false), beta_blocked(pls.size(), false);
    for (size_t i = 0; i < pls.size(); ++i) {
        bool a_ok = pls[i].alpha_free, b_ok = pls[i].beta_free;
        for (const Vec<Rat>& wb : w) {
            if (a_ok && b_ok) break;
            std::optional<Vec<Rat>> x = solve(pls[i].M, wb);
            if (!x) throw std::logic_error("pencil: intersection escaped a place locus");
            if (!rows_all_zero(pls[i].A, *x)) a_ok = true;
            if (!rows_all_zero(pls[i].B, *x)) b_ok = true;
        }
        alpha_blocked[i] = !w.empty() && !a_ok;
        beta_blocked[i] = !w.empty() && !b_ok;
    }

    bool any_alpha_blocked = std::find(alpha_blocked.begin(), alpha_blocked.end(), true) != alpha_blocked.end();
    bool any_beta_blocked = std::find(beta_blocked.begin(), beta_blocked.end(), true) != beta_blocked.end();
    rep.irrational = w.empty() || any_alpha_blocked;
    rep.fails_not_both_zero_reading = !w.empty();
    rep.fails_units_reading = !w.empty() && !any_alpha_blocked && !any_beta_blocked;

    for (size_t i = 0; i < pls.size(); ++i) {
        PencilPlaceReport pr;
        pr.place = pls[i].place;
        pr.locus_everything = pls[i].everything;
        pr.locus_basis = pls[i].locus;
        pr.w_dim = static_cast<int>(column_space_basis(pls[i].M).size());
        pr.alpha_blocked = alpha_blocked[i];
        rep.places.push_back(std::move(pr));
    }

    if (w.empty()) {
        for (const PlacePencil& pp : pls) rep.t_places.push_back(pp.place);
        return rep;
    }

    // candidate emission: prefer a pure-Q form, then basis vectors, then
    // small integer combinations; accept the first candidate reachable with
    // alpha != 0 at every place that is not blocked outright
    size_t target = 0;
    for (bool b : alpha_blocked)
        if (!b) ++target;

    Mat<Rat> wcols = columns_to_matrix(w, w[0].size());
    std::vector<Vec<Rat>> candidates;
    std::set<Vec<Rat>> seen;
    auto push = [&](Vec<Rat> v) {
        if (vec_is_zero(v)) return;
        Vec<Rat> c = canonical_scale(v);
        if (seen.insert(c).second) candidates.push_back(std::move(c));
    };
    if (arch_rational) push(quad_to_vec(q0a));
    for (const FinitePlacePair& fp : inst.finite) push(quad_to_vec(fp.q));
    candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                    [&](const Vec<Rat>& v) { return !solve(wcols, v).has_value(); }),
                     candidates.end());
    for (const Vec<Rat>& wb : w) push(wb);

    auto admissible_count = [&](const Vec<Rat>& cand, std::vector<PlaceId>& sp, std::vector<PlaceId>& tp) {
        sp.clear();
        tp.clear();
        for (size_t i = 0; i < pls.size(); ++i) {
            if (!alpha_blocked[i] && reachable_nonzero(pls[i], pls[i].A, pls[i].alpha_free, cand))
                sp.push_back(pls[i].place);
            else
                tp.push_back(pls[i].place);
        }
        return sp.size();
    };

    std::vector<PlaceId> best_sp, best_tp;
    std::optional<Vec<Rat>> best;
    auto consider = [&](const Vec<Rat>& cand) {
        std::vector<PlaceId> sp, tp;
        size_t cnt = admissible_count(cand, sp, tp);
        if (!best || cnt > best_sp.size()) {
            best = cand;
            best_sp = sp;
            best_tp = tp;
        }
        return best_sp.size() == target;
    };

    bool done = false;
    for (const Vec<Rat>& cand : candidates)
        if ((done = consider(cand))) break;
    int k = static_cast<int>(w.size());
    for (int h = 1; h <= 32 && !done; ++h) {
        std::vector<long> c(k, -h);
        while (!done) {
            long m = 0;
            for (long ci : c) m = std::max(m, std::labs(ci));
            if (m == h) {
                Vec<Rat> v(w[0].size(), Rat(0));
                for (int j = 0; j < k; ++j)
                    for (size_t i = 0; i < v.size(); ++i) v[i] += Rat(static_cast<int>(c[j])) * w[j][i];
                if (!vec_is_zero(v)) {
                    Vec<Rat> cc = canonical_scale(v);
                    if (seen.insert(cc).second) done = consider(cc);
                }
            }
            int j = 0;
            while (j < k && c[j] == h) { c[j] = -h; ++j; }
            if (j == k) break;
            ++c[j];
        }
    }
    if (!best) throw std::logic_error("pencil: candidate search exhausted");
    if (!any_alpha_blocked && best_sp.size() != pls.size())
        throw std::logic_error("pencil: no simultaneously admissible candidate found");

    // a common rational Q0 exists only when one candidate is reachable with
    // alpha != 0 at every place at once; otherwise the intersection carries
    // no admissible form and S'/T are relative to the best candidate
    if (best_sp.size() == pls.size()) rep.common_q0 = vec_to_quad(*best, inst.n);
    rep.s_prime = best_sp;
    rep.t_places = best_tp;
    return rep;
}

}  // namespace oppairs
