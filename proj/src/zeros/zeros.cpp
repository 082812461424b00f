#include "zeros/zeros.hpp"

#include <algorithm>
#include <stdexcept>

namespace oppairs {

namespace {

bool val_at_least(const Valuation& v, long m) { return v.infinite || v.v >= m; }

// residue of a p-integral rational mod pk = p^k
Int rat_residue(const Rat& x, long long p, const Int& pk) {
    Int den = x.get_den() % pk;
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t()) == 0)
        throw std::invalid_argument("denominator divisible by " + std::to_string(p));
    Int r = x.get_num() % pk * inv % pk;
    if (r < 0) r += pk;
    return r;
}

void require_p_integral(const QuadForm<Rat>& q, const LinForm<Rat>* l, long long p) {
    auto check = [&](const Rat& c) {
        if (mpz_divisible_ui_p(c.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
            throw std::invalid_argument("denominator divisible by " + std::to_string(p));
    };
    for (const auto& row : q.c)
        for (const auto& c : row) check(c);
    if (l)
        for (const auto& c : l->c) check(c);
}

Vec<Rat> to_rat_vec(const std::vector<Int>& x) {
    Vec<Rat> v(x.size());
    for (size_t i = 0; i < x.size(); ++i) v[i] = Rat(x[i]);
    return v;
}

// --- mod-p linear algebra for refinement fibers ---

struct ModSolution {
    bool ok = false;
    std::vector<Int> part;
    std::vector<std::vector<Int>> basis;
};

ModSolution solve_mod_p(std::vector<std::vector<Int>> a, std::vector<Int> rhs, int n, long long p) {
    Int P = int_of(p);
    int rows = static_cast<int>(a.size());
    for (auto& row : a)
        for (auto& e : row)
            if ((e %= P) < 0) e += P;
    for (auto& e : rhs)
        if ((e %= P) < 0) e += P;
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < n && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(a[r], a[pr]);
        std::swap(rhs[r], rhs[pr]);
        Int inv;
        mpz_invert(inv.get_mpz_t(), a[r][c].get_mpz_t(), P.get_mpz_t());
        for (int j = c; j < n; ++j) a[r][j] = a[r][j] * inv % P;
        rhs[r] = rhs[r] * inv % P;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Int f = a[i][c];
            for (int j = c; j < n; ++j) {
                a[i][j] = (a[i][j] - f * a[r][j]) % P;
                if (a[i][j] < 0) a[i][j] += P;
            }
            rhs[i] = (rhs[i] - f * rhs[r]) % P;
            if (rhs[i] < 0) rhs[i] += P;
        }
        pivots.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (rhs[i] != 0) return {};
    ModSolution s;
    s.ok = true;
    s.part.assign(n, Int(0));
    for (size_t k = 0; k < pivots.size(); ++k) s.part[pivots[k]] = rhs[k];
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    for (int f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Int> v(n, Int(0));
        v[f] = 1;
        for (size_t k = 0; k < pivots.size(); ++k) {
            Int e = (P - a[k][f]) % P;
            v[pivots[k]] = e;
        }
        s.basis.push_back(std::move(v));
    }
    return s;
}

// scale the first unit coordinate to 1
void canonicalize_class(std::vector<Int>& x, long long p, const Int& pk) {
    for (const Int& e : x) {
        if (mpz_divisible_ui_p(e.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        Int inv;
        mpz_invert(inv.get_mpz_t(), e.get_mpz_t(), pk.get_mpz_t());
        for (Int& c : x) c = c * inv % pk;
        return;
    }
    throw std::logic_error("non-primitive class");
}

// All primitive projective solutions mod p of the requested congruences,
// emitted in lexicographic order. int64 arithmetic (p < 2^20 keeps every
// intermediate product inside __int128).
std::vector<std::vector<Int>> level1(const QuadForm<Rat>& q, const LinForm<Rat>* l, long long p,
                                     bool need_q, bool need_l) {
    int n = q.n;
    Int P = int_of(p);
    std::vector<std::vector<long long>> qc(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) qc[i][j] = rat_residue(q.c[i][j], p, P).get_si();
    std::vector<long long> lc(n, 0);
    if (l)
        for (int i = 0; i < n; ++i) lc[i] = rat_residue(l->c[i], p, P).get_si();
    auto eval_q = [&](const std::vector<long long>& x) {
        unsigned __int128 s = 0;
        for (int i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            for (int j = i; j < n; ++j) {
                if (qc[i][j] == 0 || x[j] == 0) continue;
                s += static_cast<unsigned __int128>(qc[i][j]) *
                     static_cast<unsigned long long>(x[i] * x[j] % p);
            }
        }
        return static_cast<long long>(s % static_cast<unsigned __int128>(p));
    };
    auto eval_l = [&](const std::vector<long long>& x) {
        unsigned __int128 s = 0;
        for (int i = 0; i < n; ++i) s += static_cast<unsigned __int128>(lc[i]) * static_cast<unsigned long long>(x[i]);
        return static_cast<long long>(s % static_cast<unsigned __int128>(p));
    };
    std::vector<std::vector<Int>> out;
    for (int pivot = n - 1; pivot >= 0; --pivot) {
        std::vector<long long> x(n, 0);
        x[pivot] = 1;
        while (true) {
            if ((!need_q || eval_q(x) == 0) && (!need_l || eval_l(x) == 0)) {
                std::vector<Int> v(n);
                for (int i = 0; i < n; ++i) v[i] = int_of(x[i]);
                out.push_back(std::move(v));
            }
            int i = n - 1;
            while (i > pivot && x[i] == p - 1) x[i--] = 0;
            if (i == pivot) break;
            ++x[i];
        }
    }
    return out;
}

struct LevelState {
    std::vector<std::vector<Int>> classes;  // canonical mod p^level, sorted
    int level = 0;
    bool truncated = false;
};

// Refine every class from mod p^k to mod p^{k+1}. The lifts of x are
// x + p^k t where the active congruences linearize exactly to
// grad(x)·t ≡ -f(x)/p^k mod p (the quadratic term carries p^{2k}, and
// 2k ≥ k+1): each fiber is the full solution set of that system.
void expand_level(const QuadForm<Rat>& q, const LinForm<Rat>* l, long long p, bool active_q,
                  bool active_l, long long keep_limit, LevelState& st) {
    int n = q.n;
    int k = st.level;
    Int P = int_of(p);
    Int pk = pow_int(p, static_cast<unsigned long>(k));
    Int pk1 = pk * P;
    Rat pk_rat(pk);
    long long raw_cap = std::max<long long>(4096, 4 * keep_limit);
    long long fiber_cap = 1 << 20;
    std::vector<std::vector<Int>> raw;
    for (const auto& x : st.classes) {
        Vec<Rat> xr = to_rat_vec(x);
        std::vector<std::vector<Int>> rows;
        std::vector<Int> rhs;
        if (active_q) {
            Vec<Rat> g = quad_grad(q, xr);
            std::vector<Int> row(n);
            for (int i = 0; i < n; ++i) row[i] = rat_residue(g[i], p, P);
            rows.push_back(std::move(row));
            rhs.push_back(rat_residue(-eval_quad(q, xr) / pk_rat, p, P));
        }
        if (active_l) {
            std::vector<Int> row(n);
            for (int i = 0; i < n; ++i) row[i] = rat_residue(l->c[i], p, P);
            rows.push_back(std::move(row));
            rhs.push_back(rat_residue(-eval_lin(*l, xr) / pk_rat, p, P));
        }
        ModSolution sol = solve_mod_p(std::move(rows), std::move(rhs), n, p);
        if (!sol.ok) continue;
        int dim = static_cast<int>(sol.basis.size());
        int eff = 0;
        long long count = 1;
        while (eff < dim && count <= fiber_cap / p) {
            count *= p;
            ++eff;
        }
        if (eff < dim) st.truncated = true;
        std::vector<long long> a(eff, 0);
        while (true) {
            std::vector<Int> t = sol.part;
            for (int r = 0; r < eff; ++r) {
                if (a[r] == 0) continue;
                for (int i = 0; i < n; ++i) t[i] += int_of(a[r]) * sol.basis[r][i];
            }
            std::vector<Int> lift(n);
            for (int i = 0; i < n; ++i) {
                lift[i] = (x[i] + pk * (t[i] % P)) % pk1;
                if (lift[i] < 0) lift[i] += pk1;
            }
            canonicalize_class(lift, p, pk1);
            raw.push_back(std::move(lift));
            int r = eff - 1;
            while (r >= 0 && a[r] == p - 1) a[r--] = 0;
            if (r < 0) break;
            ++a[r];
        }
        if (static_cast<long long>(raw.size()) >= raw_cap) {
            st.truncated = true;
            break;
        }
    }
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    if (static_cast<long long>(raw.size()) > keep_limit) {
        raw.resize(keep_limit);
        st.truncated = true;
    }
    st.classes = std::move(raw);
    st.level = k + 1;
}

// multiply a form by p^c (c may be negative)
QuadForm<Rat> scale_quad_p(const QuadForm<Rat>& q, long long p, long c) {
    Rat f = c >= 0 ? Rat(pow_int(p, c)) : Rat(1) / Rat(pow_int(p, -c));
    return quad_scale(q, f);
}

LinForm<Rat> scale_lin_p(const LinForm<Rat>& l, long long p, long c) {
    Rat f = c >= 0 ? Rat(pow_int(p, c)) : Rat(1) / Rat(pow_int(p, -c));
    LinForm<Rat> r = l;
    for (auto& e : r.c) e = e * f;
    return r;
}

long min_coeff_valuation(const QuadForm<Rat>& q, long long p) {
    Valuation best = Valuation::inf();
    for (const auto& row : q.c)
        for (const auto& e : row) {
            Valuation v = padic_valuation(e, p);
            if (!v.infinite && (best.infinite || v.v < best.v)) best = v;
        }
    return best.infinite ? 0 : best.v;
}

long min_coeff_valuation(const LinForm<Rat>& l, long long p) {
    Valuation best = Valuation::inf();
    for (const auto& e : l.c) {
        Valuation v = padic_valuation(e, p);
        if (!v.infinite && (best.infinite || v.v < best.v)) best = v;
    }
    return best.infinite ? 0 : best.v;
}

struct PlaceClasses {
    long long p = 0;
    int levels = 0;
    std::vector<std::vector<Int>> classes;
    bool truncated = false;
    bool empty_proven = false;
};

PlaceClasses place_congruences(const QuadForm<Rat>& q0, const LinForm<Rat>& l0, long long p, int m,
                               long long limit) {
    PlaceClasses pc;
    pc.p = p;
    long tq = 0, tl = 0;
    QuadForm<Rat> q = q0;
    LinForm<Rat> l = l0;
    if (!quad_is_zero(q0)) {
        long c = -min_coeff_valuation(q0, p);
        q = scale_quad_p(q0, p, c);
        tq = m + c;
    }
    {
        long c = -min_coeff_valuation(l0, p);
        l = scale_lin_p(l0, p, c);
        tl = m + c;
    }
    int target = static_cast<int>(std::max({tq, tl, 0L}));
    pc.levels = target;
    if (target == 0) return pc;  // both constraints hold for any integer vector
    LevelState st;
    st.classes = level1(q, &l, p, tq >= 1, tl >= 1);
    st.level = 1;
    if (static_cast<long long>(st.classes.size()) > limit) {
        st.classes.resize(limit);
        st.truncated = true;
    }
    while (st.level < target && !st.classes.empty())
        expand_level(q, &l, p, st.level + 1 <= tq, st.level + 1 <= tl, limit, st);
    pc.classes = std::move(st.classes);
    pc.truncated = st.truncated;
    pc.empty_proven = pc.classes.empty() && !st.truncated;
    return pc;
}

}  // namespace

std::vector<std::vector<Int>> zeros_mod_p(const QuadForm<Rat>& q, const LinForm<Rat>& l, long long p) {
    if (p < 2 || !is_prime(int_of(p))) throw std::invalid_argument("modulus must be prime");
    require_p_integral(q, &l, p);
    return level1(q, &l, p, true, true);
}

std::optional<ZeroCertificate> certificate_from_class(const QuadForm<Rat>& q, const LinForm<Rat>* l,
                                                      long long p, const std::vector<Int>& z,
                                                      int level) {
    require_p_integral(q, l, p);
    Vec<Rat> zr = to_rat_vec(z);
    if (!val_at_least(padic_valuation(eval_quad(q, zr), p), level))
        throw std::invalid_argument("class does not solve the congruence");
    if (l && !val_at_least(padic_valuation(eval_lin(*l, zr), p), level))
        throw std::invalid_argument("class does not solve the congruence");
    int n = q.n;
    int j = -1;
    if (l) {
        for (int i = 0; i < n; ++i)
            if (padic_valuation(l->c[i], p) == Valuation::of(0)) {
                j = i;
                break;
            }
        if (j < 0) return std::nullopt;  // no unit coefficient to hold L fixed
    }
    Vec<Rat> g = quad_grad(q, zr);
    int best = -1;
    long best_nu = 0;
    for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        Rat d = l ? l->c[j] * g[i] - l->c[i] * g[j] : g[i];
        Valuation v = padic_valuation(d, p);
        if (v.infinite) continue;
        if (best < 0 || v.v < best_nu) {
            best = i;
            best_nu = v.v;
        }
    }
    if (best < 0 || 3 * best_nu >= level) return std::nullopt;
    ZeroCertificate cert;
    cert.p = p;
    cert.precision = level - static_cast<int>(best_nu);
    cert.z = z;
    cert.newton_index = best;
    cert.nu = static_cast<int>(best_nu);
    return cert;
}

std::vector<Int> hensel_lift(const QuadForm<Rat>& q, const LinForm<Rat>* l,
                             const ZeroCertificate& cert, int target_m) {
    long long p = cert.p;
    require_p_integral(q, l, p);
    if (target_m < 1) throw std::invalid_argument("target precision must be positive");
    if (2 * cert.nu >= cert.precision) throw std::domain_error("singular certificate");
    int n = q.n;
    int m = cert.precision;
    Vec<Rat> zr = to_rat_vec(cert.z);
    if (!val_at_least(padic_valuation(eval_quad(q, zr), p), m + cert.nu) ||
        (l && !val_at_least(padic_valuation(eval_lin(*l, zr), p), m + cert.nu)))
        throw std::domain_error("certificate congruences do not hold");
    int w = target_m + cert.nu + 2;
    Int pw = pow_int(p, static_cast<unsigned long>(w));
    Int pt = pow_int(p, static_cast<unsigned long>(target_m));
    std::vector<Int> z = cert.z;
    for (auto& e : z)
        if ((e %= pw) < 0) e += pw;
    // direction with L(h) = 0 exactly, as an integer vector mod p^w
    int i = cert.newton_index, j = -1;
    Vec<Rat> h(n, Rat(0));
    if (l) {
        for (int t = 0; t < n; ++t)
            if (padic_valuation(l->c[t], p) == Valuation::of(0)) {
                j = t;
                break;
            }
        if (j < 0 || i == j) throw std::domain_error("singular certificate");
        h[i] = l->c[j];
        h[j] = -l->c[i];
    } else {
        h[i] = 1;
    }
    std::vector<Int> hint(n);
    for (int t = 0; t < n; ++t) hint[t] = rat_residue(h[t], p, pw);
    auto grad_along = [&](const std::vector<Int>& v) {
        return dot(quad_grad(q, to_rat_vec(v)), h);
    };
    {
        Valuation nu = padic_valuation(grad_along(z), p);
        if (nu.infinite || nu.v != cert.nu) throw std::domain_error("singular certificate");
    }
    if (l) {  // one exact step fixes the linear congruence at working precision
        Rat lz = eval_lin(*l, to_rat_vec(z));
        if (sgn(lz) != 0) {
            Int t = rat_residue(-lz / l->c[j], p, pw);
            z[j] = (z[j] + t) % pw;
        }
    }
    while (true) {
        Rat qz = eval_quad(q, to_rat_vec(z));
        Valuation v = padic_valuation(qz, p);
        if (val_at_least(v, target_m)) break;
        Rat d = grad_along(z);
        Valuation nu = padic_valuation(d, p);
        if (nu.infinite || 2 * nu.v >= v.v) throw std::domain_error("singular certificate");
        Int step = rat_residue(-qz / d, p, pw);
        for (int t = 0; t < n; ++t) z[t] = (z[t] + step * hint[t]) % pw;
    }
    for (auto& e : z)
        if ((e %= pt) < 0) e += pt;
    return z;
}

std::optional<ZeroCertificate> smooth_local_zero(const QuadForm<Rat>& q, long long p, int max_level) {
    require_p_integral(q, nullptr, p);
    LevelState st;
    st.classes = level1(q, nullptr, p, true, false);
    st.level = 1;
    while (true) {
        for (const auto& z : st.classes) {
            auto cert = certificate_from_class(q, nullptr, p, z, st.level);
            if (cert) return cert;
        }
        if (st.level >= max_level || st.classes.empty()) return std::nullopt;
        expand_level(q, nullptr, p, true, false, 65536, st);
    }
}

int precision_for_eps(const Rat& eps, long long p) {
    if (sgn(eps) <= 0) throw std::invalid_argument("eps must be positive");
    Rat u = Rat(1) / eps;
    long t = 0;
    Rat pw(1);
    if (pw < u) {
        while (pw < u) {
            pw *= static_cast<long>(p);
            ++t;
            if (t > (1 << 20)) throw std::invalid_argument("eps out of range");
        }
    } else {
        Rat nxt = pw / static_cast<long>(p);
        while (nxt >= u) {
            pw = nxt;
            --t;
            nxt /= static_cast<long>(p);
            if (t < -(1 << 20)) throw std::invalid_argument("eps out of range");
        }
    }
    return static_cast<int>(t) + 1;
}

CongruenceStream congruence_classes(const PairInstance& inst, const std::map<long long, int>& precision,
                                    long long limit) {
    if (limit < 1) throw std::invalid_argument("limit must be positive");
    CongruenceStream out;
    std::vector<PlaceClasses> per_place;
    for (const auto& fp : inst.finite) {
        auto it = precision.find(fp.p);
        if (it == precision.end())
            throw std::invalid_argument("missing precision for place " + std::to_string(fp.p));
        per_place.push_back(place_congruences(fp.q, fp.l, fp.p, it->second, limit));
        out.truncated = out.truncated || per_place.back().truncated;
        if (per_place.back().levels > 0 && per_place.back().classes.empty()) {
            out.provably_empty = per_place.back().empty_proven;
            return out;
        }
    }
    std::vector<int> active;
    Int modulus(1);
    for (size_t k = 0; k < per_place.size(); ++k)
        if (per_place[k].levels > 0) {
            active.push_back(static_cast<int>(k));
            modulus *= pow_int(per_place[k].p, static_cast<unsigned long>(per_place[k].levels));
        }
    auto place_precisions = [&]() {
        std::vector<std::pair<long long, int>> pp;
        for (const auto& pc : per_place) pp.emplace_back(pc.p, pc.levels);
        return pp;
    };
    if (active.empty()) {
        CongruenceClass c;
        c.modulus = 1;
        c.residue.assign(inst.n, Int(0));
        c.place_precision = place_precisions();
        out.classes.push_back(std::move(c));
        return out;
    }
    // CRT basis: e_k ≡ 1 mod p_k^{M_k}, ≡ 0 at the other active places
    std::vector<Int> crt(active.size());
    for (size_t k = 0; k < active.size(); ++k) {
        const auto& pc = per_place[active[k]];
        Int pk = pow_int(pc.p, static_cast<unsigned long>(pc.levels));
        Int rest = modulus / pk;
        Int inv;
        mpz_invert(inv.get_mpz_t(), Int(rest % pk).get_mpz_t(), pk.get_mpz_t());
        crt[k] = rest * inv % modulus;
    }
    std::vector<size_t> idx(active.size(), 0);
    while (true) {
        CongruenceClass c;
        c.modulus = modulus;
        c.residue.assign(inst.n, Int(0));
        for (size_t k = 0; k < active.size(); ++k) {
            const auto& res = per_place[active[k]].classes[idx[k]];
            for (int i = 0; i < inst.n; ++i) c.residue[i] = (c.residue[i] + res[i] * crt[k]) % modulus;
        }
        c.place_precision = place_precisions();
        out.classes.push_back(std::move(c));
        if (static_cast<long long>(out.classes.size()) >= limit) {
            // unreported combinations remain?
            size_t k = active.size();
            bool more = false;
            for (size_t t = 0; t < k; ++t)
                if (idx[t] + 1 < per_place[active[t]].classes.size()) more = true;
            out.truncated = out.truncated || more;
            break;
        }
        int t = static_cast<int>(active.size()) - 1;
        while (t >= 0 && idx[t] + 1 == per_place[active[t]].classes.size()) idx[t--] = 0;
        if (t < 0) break;
        ++idx[t];
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const CongruenceClass& a, const CongruenceClass& b) { return a.residue < b.residue; });
    // self-verification: every emitted class must satisfy the exact contract
    for (const auto& c : out.classes) {
        for (const auto& fp : inst.finite) {
            int m = precision.at(fp.p);
            Vec<Rat> r = to_rat_vec(c.residue);
            if (!val_at_least(padic_valuation(eval_quad(fp.q, r), fp.p), m) ||
                !val_at_least(padic_valuation(eval_lin(fp.l, r), fp.p), m))
                throw std::logic_error("congruence class failed self-verification");
            int lv = 0;
            for (const auto& pp : c.place_precision)
                if (pp.first == fp.p) lv = pp.second;
            if (lv > 0) {
                bool primitive = false;
                for (const auto& e : c.residue)
                    if (!mpz_divisible_ui_p(e.get_mpz_t(), static_cast<unsigned long>(fp.p))) primitive = true;
                if (!primitive) throw std::logic_error("congruence class failed self-verification");
            }
        }
    }
    return out;
}

}  // namespace oppairs
