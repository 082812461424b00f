#include "search/search.hpp"

#include "zeros/zeros.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oppairs {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    bool armed = false;
    Clock::time_point at{};
    bool expired() const { return armed && Clock::now() >= at; }
};

Deadline make_deadline(long long wall_ms) {
    Deadline d;
    if (wall_ms > 0) {
        d.armed = true;
        d.at = Clock::now() + std::chrono::milliseconds(wall_ms);
    }
    return d;
}

Vec<ExtReal> lift_vec(const Vec<Rat>& x) {
    Vec<ExtReal> v(x.size());
    for (size_t i = 0; i < x.size(); ++i) v[i] = ExtReal(x[i]);
    return v;
}

void validate_eps(const PairInstance& inst, const EpsMap& eps) {
    if (sgn(eps.arch) <= 0) throw std::invalid_argument("eps must be positive at the real place");
    std::set<long long> primes;
    for (const FinitePlacePair& fp : inst.finite) primes.insert(fp.p);
    if (eps.finite.size() != primes.size())
        throw std::invalid_argument("eps must name exactly the instance's finite places");
    for (const auto& [p, e] : eps.finite) {
        if (!primes.count(p)) throw std::invalid_argument("eps names a place outside the instance");
        if (sgn(e) <= 0) throw std::invalid_argument("eps must be positive at every place");
    }
}

// minimal m with p^-m < eps (may be negative for eps > 1)
int min_precision_for_eps(const Rat& eps, long long p) {
    int m = precision_for_eps(eps, p);
    while (true) {
        int mm = m - 1;
        Rat val = mm >= 0 ? Rat(Rat(1) / pow_int(p, static_cast<unsigned long>(mm)))
                          : Rat(pow_int(p, static_cast<unsigned long>(-mm)));
        if (val < eps)
            m = mm;
        else
            break;
    }
    return m;
}

long min_coeff_val_quad(const QuadForm<Rat>& q, long long p) {
    long c = 0;
    bool any = false;
    for (int i = 0; i < q.n; ++i)
        for (int j = i; j < q.n; ++j) {
            if (sgn(q.c[i][j]) == 0) continue;
            long v = padic_valuation(q.c[i][j], p).v;
            if (!any || v < c) c = v;
            any = true;
        }
    return any ? c : 0;
}

long min_coeff_val_lin(const LinForm<Rat>& l, long long p) {
    long c = 0;
    bool any = false;
    for (const Rat& x : l.c) {
        if (sgn(x) == 0) continue;
        long v = padic_valuation(x, p).v;
        if (!any || v < c) c = v;
        any = true;
    }
    return any ? c : 0;
}

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

VerifyResult verify_witness(const PairInstance& inst, const Vec<Rat>& x, const EpsMap& eps) {
    if (static_cast<int>(x.size()) != inst.n) throw std::invalid_argument("verify_witness: dimension mismatch");
    if (vec_is_zero(x)) throw std::invalid_argument("verify_witness: zero vector");
    validate_eps(inst, eps);
    for (const Rat& xi : x) {
        Int den = xi.get_den();
        for (const FinitePlacePair& fp : inst.finite) {
            Int p = int_of(fp.p);
            while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) den /= p;
        }
        if (den != 1) throw std::invalid_argument("verify_witness: denominator outside the instance's primes");
    }

    VerifyResult res;
    Witness w;
    w.x = x;
    w.eps = eps;

    ExtReal qv = eval_quad(inst.q_arch, lift_vec(x));
    ExtReal lv = eval_lin(inst.l_arch, lift_vec(x));
    ExtReal ea = ExtReal(eps.arch);
    bool q_ok = ext_abs_lt(qv, ea);
    bool l_ok = ext_abs_lt(lv, ea);
    PlaceMagnitudes pm;
    pm.place = PlaceId::arch();
    pm.q_value = ext_abs(qv);
    pm.l_value = ext_abs(lv);
    pm.q_exact_zero = is_zero_k(qv);
    pm.l_exact_zero = is_zero_k(lv);
    {
        std::ostringstream os;
        os << "arch: |Q(x)| = " << emit_ext(pm.q_value) << (q_ok ? " < " : " >= ") << emit_rat(eps.arch)
           << (pm.q_exact_zero ? " (exact zero)" : "") << " : " << pass_fail(q_ok);
        w.transcript.push_back(os.str());
        if (!q_ok) res.violations.push_back({PlaceId::arch(), os.str()});
    }
    {
        std::ostringstream os;
        os << "arch: |L(x)| = " << emit_ext(pm.l_value) << (l_ok ? " < " : " >= ") << emit_rat(eps.arch)
           << (pm.l_exact_zero ? " (exact zero)" : "") << " : " << pass_fail(l_ok);
        w.transcript.push_back(os.str());
        if (!l_ok) res.violations.push_back({PlaceId::arch(), os.str()});
    }
    w.places.push_back(pm);

    for (const FinitePlacePair& fp : inst.finite) {
        Rat qr = eval_quad(fp.q, x);
        Rat lr = eval_lin(fp.l, x);
        const Rat& ep = eps.finite.at(fp.p);
        PlaceMagnitudes fm;
        fm.place = PlaceId::finite(fp.p);
        fm.q_abs = padic_abs(qr, fp.p);
        fm.l_abs = padic_abs(lr, fp.p);
        fm.q_exact_zero = sgn(qr) == 0;
        fm.l_exact_zero = sgn(lr) == 0;
        bool fq_ok = fm.q_abs < ep;
        bool fl_ok = fm.l_abs < ep;
        {
            std::ostringstream os;
            os << "p=" << fp.p << ": |Q(x)|_" << fp.p << " = " << emit_rat(fm.q_abs) << (fq_ok ? " < " : " >= ")
               << emit_rat(ep) << (fm.q_exact_zero ? " (exact zero)" : "") << " : " << pass_fail(fq_ok);
            w.transcript.push_back(os.str());
            if (!fq_ok) res.violations.push_back({fm.place, os.str()});
        }
        {
            std::ostringstream os;
            os << "p=" << fp.p << ": |L(x)|_" << fp.p << " = " << emit_rat(fm.l_abs) << (fl_ok ? " < " : " >= ")
               << emit_rat(ep) << (fm.l_exact_zero ? " (exact zero)" : "") << " : " << pass_fail(fl_ok);
            w.transcript.push_back(os.str());
            if (!fl_ok) res.violations.push_back({fm.place, os.str()});
        }
        w.places.push_back(fm);
    }

    if (res.violations.empty()) res.witness = std::move(w);
    return res;
}

namespace {

// ---------------------------------------------------------- strategy S1 ---
// Enumerate the coset lattice of each congruence class inside a real box
// grown geometrically; the serial order realizes the lexicographic tie-break.

struct StepMeter {
    long long used = 0;
    long long cap = 0;
    const Deadline* dl = nullptr;
    bool spent() const { return used >= cap || (used % 256 == 0 && dl->expired()); }
};

std::optional<Witness> coset_strategy(const PairInstance& inst, const EpsMap& eps, long long max_classes,
                                      StepMeter& meter) {
    std::map<long long, int> prec;
    for (const FinitePlacePair& fp : inst.finite) prec[fp.p] = min_precision_for_eps(eps.finite.at(fp.p), fp.p);
    CongruenceStream cs = congruence_classes(inst, prec, std::max<long long>(1, max_classes));
    if (cs.classes.empty()) return std::nullopt;

    int n = inst.n;
    ExtReal ea = ExtReal(eps.arch);
    for (long long radius = 0, prev = -1; radius <= (1 << 20); prev = radius, radius = radius ? radius * 2 : 1) {
        for (const CongruenceClass& cl : cs.classes) {
            std::vector<long long> o(n, -radius);
            while (true) {
                long long m = 0;
                for (long long oi : o) m = std::max(m, oi < 0 ? -oi : oi);
                if (m > prev) {  // offsets new to this round
                    if (meter.spent()) return std::nullopt;
                    ++meter.used;
                    Vec<Rat> x(n);
                    bool zero = true;
                    for (int i = 0; i < n; ++i) {
                        Int xi = cl.residue[i] + cl.modulus * int_of(o[i]);
                        if (sgn(xi) != 0) zero = false;
                        x[i] = Rat(xi);
                    }
                    if (!zero) {
                        ExtReal qv = eval_quad(inst.q_arch, lift_vec(x));
                        if (ext_abs_lt(qv, ea)) {
                            ExtReal lv = eval_lin(inst.l_arch, lift_vec(x));
                            if (ext_abs_lt(lv, ea)) {
                                VerifyResult vr = verify_witness(inst, x, eps);
                                if (!vr.witness) throw std::logic_error("coset strategy produced an invalid candidate");
                                return vr.witness;
                            }
                        }
                    }
                }
                int k = 0;
                while (k < n && o[k] == radius) { o[k] = -radius; ++k; }
                if (k == n) break;
                ++o[k];
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------- strategy S2 ---
// Rational hyperbolic family: integer directions w1 (isotropic for every Q_s,
// inside every ker L_s), u (a hyperbolic partner at every place), w3 (third
// direction, Q_s-orthogonal to w1). Candidates x = u + y2 w1 + t w3 have
// L_s(x) = 0 and Q_s(x) linear in y2, so finite constraints become
// congruences on y2 and the real constraint picks y2's integer part.

struct FamilyFrame {
    Vec<Rat> w1, u, w3;
};

bool frame_w1_ok(const PairInstance& inst, const Vec<Rat>& w1) {
    if (vec_is_zero(w1)) return false;
    if (!is_zero_k(eval_lin(inst.l_arch, lift_vec(w1)))) return false;
    if (!is_zero_k(eval_quad(inst.q_arch, lift_vec(w1)))) return false;
    for (const FinitePlacePair& fp : inst.finite) {
        if (sgn(eval_lin(fp.l, w1)) != 0) return false;
        if (sgn(eval_quad(fp.q, w1)) != 0) return false;
    }
    return true;
}

bool frame_u_ok(const PairInstance& inst, const Vec<Rat>& w1, const Vec<Rat>& u) {
    if (vec_is_zero(u)) return false;
    if (!is_zero_k(eval_lin(inst.l_arch, lift_vec(u)))) return false;
    if (is_zero_k(bilinear(inst.q_arch, lift_vec(w1), lift_vec(u)))) return false;
    for (const FinitePlacePair& fp : inst.finite) {
        if (sgn(eval_lin(fp.l, u)) != 0) return false;
        if (sgn(bilinear(fp.q, w1, u)) == 0) return false;
    }
    return true;
}

bool frame_w3_ok(const PairInstance& inst, const Vec<Rat>& w1, const Vec<Rat>& u, const Vec<Rat>& w3) {
    if (vec_is_zero(w3)) return false;
    if (!is_zero_k(eval_lin(inst.l_arch, lift_vec(w3)))) return false;
    if (!is_zero_k(bilinear(inst.q_arch, lift_vec(w1), lift_vec(w3)))) return false;
    for (const FinitePlacePair& fp : inst.finite) {
        if (sgn(eval_lin(fp.l, w3)) != 0) return false;
        if (sgn(bilinear(fp.q, w1, w3)) != 0) return false;
    }
    Mat<Rat> span = {w1, u, w3};
    return rref(span) == 3;
}

// shell enumeration, sparse vectors first within a shell
template <class Pred>
std::optional<Vec<Rat>> shell_search(int n, int max_height, Pred&& ok) {
    for (int h = 1; h <= max_height; ++h) {
        std::vector<Vec<Rat>> shell;
        std::vector<long> x(n, -h);
        while (true) {
            long m = 0;
            for (long xi : x) m = std::max(m, std::labs(xi));
            if (m == h) {
                Vec<Rat> v(n);
                for (int i = 0; i < n; ++i) v[i] = Rat(static_cast<int>(x[i]));
                shell.push_back(std::move(v));
            }
            int k = 0;
            while (k < n && x[k] == h) { x[k] = -h; ++k; }
            if (k == n) break;
            ++x[k];
        }
        std::stable_sort(shell.begin(), shell.end(), [](const Vec<Rat>& a, const Vec<Rat>& b) {
            int na = 0, nb = 0;
            for (const Rat& t : a) na += sgn(t) != 0;
            for (const Rat& t : b) nb += sgn(t) != 0;
            return na < nb;
        });
        for (const Vec<Rat>& v : shell)
            if (ok(v)) return v;
    }
    return std::nullopt;
}

std::optional<FamilyFrame> find_frame(const PairInstance& inst) {
    FamilyFrame fr;
    // seed from the hyperbolic normal form of the first finite place's pair
    bool seeded = false;
    if (!inst.finite.empty() && inst.n == 4) {
        try {
            std::optional<NormalForm<Rat>> nf = normal_form_pair(inst.finite[0].q, inst.finite[0].l);
            if (nf) {
                auto col = [&](int j) {
                    Vec<Rat> v(4);
                    for (int i = 0; i < 4; ++i) v[i] = nf->g[i][j];
                    return canonical_scale(v);
                };
                Vec<Rat> w1 = col(0), u = col(1), w3 = col(2);
                if (frame_w1_ok(inst, w1) && frame_u_ok(inst, w1, u) && frame_w3_ok(inst, w1, u, w3)) {
                    fr.w1 = w1;
                    fr.u = u;
                    fr.w3 = w3;
                    seeded = true;
                }
            }
        } catch (const std::invalid_argument&) {
            // no rational normal form; fall through to the direct search
        }
    }
    if (!seeded) {
        auto w1 = shell_search(inst.n, 6, [&](const Vec<Rat>& v) { return frame_w1_ok(inst, v); });
        if (!w1) return std::nullopt;
        auto u = shell_search(inst.n, 6, [&](const Vec<Rat>& v) { return frame_u_ok(inst, *w1, v); });
        if (!u) return std::nullopt;
        auto w3 = shell_search(inst.n, 6, [&](const Vec<Rat>& v) { return frame_w3_ok(inst, *w1, *u, v); });
        if (!w3) return std::nullopt;
        fr.w1 = *w1;
        fr.u = *u;
        fr.w3 = *w3;
    }
    return fr;
}

// residue of a rational with p-unit denominator modulo pk
Int rat_mod(const Rat& x, const Int& pk) {
    Int num = x.get_num() % pk;
    if (num < 0) num += pk;
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), Int(x.get_den() % pk).get_mpz_t(), pk.get_mpz_t()) == 0)
        throw std::logic_error("rat_mod: denominator shares a factor with the modulus");
    return Int((num * inv) % pk);
}

struct FamilyPlace {
    long long p = 0;
    QuadForm<Rat> q;  // p-primitive scaling of Q_p
    int target = 0;   // required valuation of Q'(x)
    Rat c;            // 2 B'(w1, u), nonzero
    long vc = 0;
    Rat a0, a1, a2;   // Q'(u), 2 B'(u, w3), Q'(w3)
    Int pe;           // p^{target - vc} when positive, else 1
    int e = 0;
};

std::optional<Witness> family_strategy(const PairInstance& inst, const EpsMap& eps, StepMeter& meter) {
    std::optional<FamilyFrame> fr = find_frame(inst);
    if (!fr) return std::nullopt;

    std::vector<FamilyPlace> fps;
    for (const FinitePlacePair& fp : inst.finite) {
        FamilyPlace f;
        f.p = fp.p;
        long cq = min_coeff_val_quad(fp.q, fp.p);
        long shift = cq < 0 ? -cq : 0;
        Rat scale = shift > 0 ? Rat(pow_int(fp.p, static_cast<unsigned long>(shift))) : Rat(1);
        f.q = quad_scale(fp.q, scale);
        int m = min_precision_for_eps(eps.finite.at(fp.p), fp.p);
        f.target = m + static_cast<int>(shift);
        f.c = Rat(2) * bilinear(f.q, fr->w1, fr->u);
        f.vc = padic_valuation(f.c, fp.p).v;
        f.a0 = eval_quad(f.q, fr->u);
        f.a1 = Rat(2) * bilinear(f.q, fr->u, fr->w3);
        f.a2 = eval_quad(f.q, fr->w3);
        f.e = f.target - static_cast<int>(f.vc);
        f.pe = f.e > 0 ? pow_int(fp.p, static_cast<unsigned long>(f.e)) : Int(1);
        fps.push_back(std::move(f));
    }

    ExtReal ea = ExtReal(eps.arch);
    ExtReal qa_u = eval_quad(inst.q_arch, lift_vec(fr->u));
    ExtReal qa_w3 = eval_quad(inst.q_arch, lift_vec(fr->w3));
    ExtReal ba_uw3 = bilinear(inst.q_arch, lift_vec(fr->u), lift_vec(fr->w3));
    ExtReal c_arch = ExtReal(2) * bilinear(inst.q_arch, lift_vec(fr->w1), lift_vec(fr->u));
    ExtReal half(Rat(1, 2));

    for (long long step = 0;; ++step) {
        if (meter.spent()) return std::nullopt;
        ++meter.used;
        long long t = step == 0 ? 0 : (step % 2 == 1 ? (step + 1) / 2 : -(step / 2));
        Rat rt(int_of(t));

        // per-place congruence on y2
        Int modulus(1), residue(0);
        bool feasible = true;
        for (const FamilyPlace& f : fps) {
            Rat a = f.a0 + f.a1 * rt + f.a2 * rt * rt;
            if (f.e <= 0) {
                // c y2 cannot help below its own valuation: need v(a) >= target
                if (sgn(a) != 0 && padic_valuation(a, f.p).v < f.target) feasible = false;
                continue;
            }
            if (sgn(a) != 0 && padic_valuation(a, f.p).v < f.vc) {
                feasible = false;
                break;
            }
            Rat r = -a / f.c;                 // p-integral by the check above
            Int rp = rat_mod(r, f.pe);
            // combine with the running CRT state
            Int g, s, u2;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u2.get_mpz_t(), modulus.get_mpz_t(), f.pe.get_mpz_t());
            // moduli are coprime (distinct primes), g = 1
            Int diff = rp - residue;
            Int add = (diff * s) % f.pe;
            residue = residue + modulus * add;
            modulus = modulus * f.pe;
            residue %= modulus;
            if (residue < 0) residue += modulus;
        }
        if (!feasible) continue;

        // real slot: y2 = residue + modulus k, Q_arch(x) = A + c_arch y2
        ExtReal a_arch = qa_u + ExtReal(2) * ba_uw3 * ExtReal(rt) + qa_w3 * ExtReal(rt) * ExtReal(rt);
        ExtReal base = a_arch + c_arch * ExtReal(Rat(residue));
        ExtReal denom = c_arch * ExtReal(Rat(modulus));
        ExtReal z = (ExtReal(0) - base) / denom;
        Int k0 = ext_floor(z + half);
        for (int dk = -1; dk <= 1; ++dk) {
            Int k = k0 + dk;
            Int y2 = residue + modulus * k;
            ExtReal val = a_arch + c_arch * ExtReal(Rat(y2));
            if (!ext_abs_lt(val, ea)) continue;
            Vec<Rat> x(inst.n);
            bool zero = true;
            for (int i = 0; i < inst.n; ++i) {
                x[i] = fr->u[i] + Rat(y2) * fr->w1[i] + rt * fr->w3[i];
                if (sgn(x[i]) != 0) zero = false;
            }
            if (zero) continue;
            VerifyResult vr = verify_witness(inst, x, eps);
            if (!vr.witness) throw std::logic_error("family strategy produced an invalid candidate");
            return vr.witness;
        }
    }
}

// ---------------------------------------------------------- strategy S3 ---
// Multiplier fallback: scale an integer vector by a = prod p^{e_p} so the
// finite constraints hold identically, and search the real place with the
// correspondingly tightened bounds.

std::optional<Witness> multiplier_strategy(const PairInstance& inst, const EpsMap& eps, StepMeter& meter) {
    Int a(1);
    for (const FinitePlacePair& fp : inst.finite) {
        int m = min_precision_for_eps(eps.finite.at(fp.p), fp.p);
        long cq = min_coeff_val_quad(fp.q, fp.p);
        long cl = min_coeff_val_lin(fp.l, fp.p);
        long long needq = m + (cq < 0 ? -cq : 0);
        long long needl = m + (cl < 0 ? -cl : 0);
        long long e = std::max<long long>({0, (needq + 1) / 2, needl});
        a *= pow_int(fp.p, static_cast<unsigned long>(e));
    }
    Rat ra(a);
    Rat eq = eps.arch / (ra * ra);
    Rat el = eps.arch / ra;
    ExtReal eeq(eq), eel(el);

    int n = inst.n;
    for (long h = 1; h <= (1 << 16); ++h) {
        std::vector<long> x(n, -h);
        while (true) {
            long m = 0;
            for (long xi : x) m = std::max(m, std::labs(xi));
            if (m == h) {
                if (meter.spent()) return std::nullopt;
                ++meter.used;
                Vec<Rat> v(n);
                for (int i = 0; i < n; ++i) v[i] = Rat(static_cast<int>(x[i]));
                ExtReal qv = eval_quad(inst.q_arch, lift_vec(v));
                if (ext_abs_lt(qv, eeq)) {
                    ExtReal lv = eval_lin(inst.l_arch, lift_vec(v));
                    if (ext_abs_lt(lv, eel)) {
                        Vec<Rat> scaled(n);
                        for (int i = 0; i < n; ++i) scaled[i] = v[i] * ra;
                        VerifyResult vr = verify_witness(inst, scaled, eps);
                        if (vr.witness) return vr.witness;
                        // arch passed but a finite margin was missed (possible
                        // when coefficients carry off-place denominators);
                        // keep searching
                    }
                }
            }
            int k = 0;
            while (k < n && x[k] == h) { x[k] = -h; ++k; }
            if (k == n) break;
            ++x[k];
        }
    }
    return std::nullopt;
}

}  // namespace

SearchOutcome search_witness(const PairInstance& inst, const EpsMap& eps, const SearchBudget& budget,
                             bool override_hypotheses) {
    validate_eps(inst, eps);
    if (budget.max_steps < 0 || budget.max_classes < 1) throw std::invalid_argument("invalid budget");
    if (!override_hypotheses) {
        HypothesisReport hr = check_hypotheses(inst);
        if (!hr.pass()) {
            std::ostringstream os;
            os << "hypotheses fail:";
            if (!hr.cond1) os << " (1) some Q_s degenerate;";
            if (!hr.cond2) os << " (2) some restriction degenerate or anisotropic;";
            if (!hr.cond3) os << " (3) the pencil admits a common rational form;";
            throw HypothesisError(os.str());
        }
    }

    Deadline dl = make_deadline(budget.wall_ms);
    SearchOutcome out;

    // budget slices: the coset pass gets min(total/4, 100000), the family
    // pass three quarters of the remainder, the multiplier pass the rest
    long long total = budget.max_steps;
    StepMeter meter{0, std::min<long long>(total / 4, 100000), &dl};
    std::optional<Witness> w = coset_strategy(inst, eps, budget.max_classes, meter);
    out.steps = meter.used;
    if (w) {
        out.witness = std::move(w);
        out.strategy = "coset";
        return out;
    }

    long long remaining = total - out.steps;
    meter = StepMeter{0, remaining * 3 / 4, &dl};
    w = family_strategy(inst, eps, meter);
    out.steps += meter.used;
    if (w) {
        out.witness = std::move(w);
        out.strategy = "family";
        return out;
    }

    remaining = total - out.steps;
    meter = StepMeter{0, remaining, &dl};
    w = multiplier_strategy(inst, eps, meter);
    out.steps += meter.used;
    if (w) {
        out.witness = std::move(w);
        out.strategy = "multiplier";
    }
    return out;
}

ExperimentReport epsilon_experiment(const PairInstance& inst, const std::vector<EpsMap>& schedule,
                                    const SearchBudget& budget_per_entry, bool override_hypotheses) {
    // per place, the distinct bounds must strictly decrease in first-appearance order
    auto check_decreasing = [](const std::vector<Rat>& seq, const char* where) {
        std::vector<Rat> distinct;
        for (const Rat& v : seq)
            if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) distinct.push_back(v);
        for (size_t i = 1; i < distinct.size(); ++i)
            if (!(distinct[i] < distinct[i - 1]))
                throw std::invalid_argument(std::string("epsilon schedule not decreasing at ") + where);
    };
    if (!schedule.empty()) {
        std::vector<Rat> arch;
        for (const EpsMap& e : schedule) arch.push_back(e.arch);
        check_decreasing(arch, "the real place");
        for (const FinitePlacePair& fp : inst.finite) {
            std::vector<Rat> col;
            for (const EpsMap& e : schedule) col.push_back(e.finite.at(fp.p));
            check_decreasing(col, place_name(PlaceId::finite(fp.p)).c_str());
        }
    }

    ExperimentReport rep;
    rep.rows.resize(schedule.size());

    // process tightest entries first so their witnesses can be reused
    std::vector<size_t> order(schedule.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (schedule[a].arch != schedule[b].arch) return schedule[a].arch < schedule[b].arch;
        auto ia = schedule[a].finite.begin(), ib = schedule[b].finite.begin();
        for (; ia != schedule[a].finite.end() && ib != schedule[b].finite.end(); ++ia, ++ib) {
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return a < b;
    });

    std::vector<Witness> found;
    for (size_t idx : order) {
        ExperimentRow row;
        row.eps = schedule[idx];
        bool reused = false;
        for (const Witness& wit : found) {
            VerifyResult vr = verify_witness(inst, wit.x, row.eps);
            if (vr.witness) {
                row.witness = std::move(vr.witness);
                row.reused = true;
                row.strategy = "reuse";
                reused = true;
                break;
            }
        }
        if (!reused) {
            SearchOutcome so = search_witness(inst, row.eps, budget_per_entry, override_hypotheses);
            row.steps = so.steps;
            row.strategy = so.strategy;
            if (so.witness) {
                found.push_back(*so.witness);
                row.witness = std::move(so.witness);
            }
        }
        rep.rows[idx] = std::move(row);
    }
    return rep;
}

std::optional<ReductionResult> reduce_dimension(const PairInstance& inst, const SearchBudget& budget) {
    if (inst.n < 5) throw std::invalid_argument("reduce_dimension: dimension must be at least 5");
    {
        HypothesisReport hr = check_hypotheses(inst);
        if (!hr.pass()) throw HypothesisError("reduce_dimension: instance fails the hypotheses");
    }

    int n = inst.n;
    long long samples = 0;
    std::set<Vec<Rat>> seen;
    for (long h = 1, prev = 0; h <= (1 << 12); prev = h, h *= 2) {
        std::vector<long> cvec(n, -h);
        while (true) {
            long m = 0;
            for (long ci : cvec) m = std::max(m, std::labs(ci));
            if (m > prev) {
                Vec<Rat> M(n);
                for (int i = 0; i < n; ++i) M[i] = Rat(static_cast<int>(cvec[i]));
                if (!vec_is_zero(M)) {
                    Vec<Rat> cm = canonical_scale(M);
                    if (seen.insert(cm).second) {
                        ++samples;
                        if (samples > budget.max_steps) return std::nullopt;

                        LinForm<Rat> functional(cm);
                        Mat<Rat> row = {cm};
                        std::vector<Vec<Rat>> kern = nullspace(row);

                        PairInstance sub;
                        sub.label = inst.label + "|restricted";
                        sub.n = n - 1;
                        sub.d = inst.d;
                        std::vector<Vec<ExtReal>> kern_e;
                        Mat<ExtReal> ge(n, Vec<ExtReal>(kern.size(), ExtReal(0)));
                        Mat<Rat> gr(n, Vec<Rat>(kern.size(), Rat(0)));
                        for (size_t j = 0; j < kern.size(); ++j)
                            for (int i = 0; i < n; ++i) {
                                gr[i][j] = kern[j][i];
                                ge[i][j] = ExtReal(kern[j][i]);
                            }
                        for (const Vec<Rat>& k : kern) kern_e.push_back(lift_vec(k));
                        sub.q_arch = restrict_quad(inst.q_arch, kern_e);
                        sub.l_arch = lin_compose(inst.l_arch, ge);
                        bool ok = !sub.l_arch.is_zero();
                        for (const FinitePlacePair& fp : inst.finite) {
                            if (!ok) break;
                            FinitePlacePair sf;
                            sf.p = fp.p;
                            sf.q = restrict_quad(fp.q, kern);
                            sf.l = lin_compose(fp.l, gr);
                            if (sf.l.is_zero()) {
                                ok = false;
                                break;
                            }
                            sub.finite.push_back(std::move(sf));
                        }
                        if (ok) {
                            HypothesisReport hr = check_hypotheses(sub);
                            if (hr.pass()) {
                                ReductionResult rr;
                                rr.functional = cm;
                                rr.restricted = std::move(sub);
                                rr.samples = samples;
                                return rr;
                            }
                        }
                    }
                }
            }
            int k = 0;
            while (k < n && cvec[k] == h) { cvec[k] = -h; ++k; }
            if (k == n) break;
            ++cvec[k];
        }
    }
    return std::nullopt;
}

ObstructionScan obstruction_scan(const PairInstance& inst, long long height) {
    PencilReport pr = pencil_rationality(inst);
    if (pr.irrational || !pr.common_q0)
        throw std::invalid_argument("obstruction_scan: instance has no simultaneous rational form");
    const QuadForm<Rat>& q0 = *pr.common_q0;

    ObstructionScan scan;
    if (height <= 0) return scan;

    // q0 is integral and primitive; use machine integers for the numerators
    int n = q0.n;
    std::vector<std::vector<long long>> c(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) c[i][j] = q0.c[i][j].get_num().get_si();

    // denominators: products of p^{e_p}, e_p <= log_p height
    std::vector<Int> dens{Int(1)};
    for (const FinitePlacePair& fp : inst.finite) {
        long emax = floor_log(int_of(height), fp.p);
        std::vector<Int> next;
        for (const Int& d : dens) {
            Int pw(1);
            for (long e = 0; e <= emax; ++e) {
                next.push_back(d * pw);
                pw *= int_of(fp.p);
            }
        }
        dens = std::move(next);
    }
    std::sort(dens.begin(), dens.end());
    dens.erase(std::unique(dens.begin(), dens.end()), dens.end());

    std::vector<long long> y(n, -height);
    std::vector<PlaceId> places;
    places.push_back(PlaceId::arch());
    for (const FinitePlacePair& fp : inst.finite) places.push_back(PlaceId::finite(fp.p));

    for (const Int& den : dens) {
        std::fill(y.begin(), y.end(), -height);
        while (true) {
            long long acc = 0;
            bool zero = true;
            for (int i = 0; i < n; ++i) {
                if (y[i] != 0) zero = false;
                for (int j = i; j < n; ++j)
                    if (c[i][j]) acc += c[i][j] * y[i] * y[j];
            }
            if (!zero && acc != 0) {
                Rat v = Rat(int_of(acc)) / Rat(den * den);
                Rat maxmag(0);
                for (const PlaceId& s : places) {
                    Rat mag = s.archimedean ? Rat(abs(v)) : padic_abs(v, s.p);
                    if (mag > maxmag) maxmag = mag;
                }
                if (maxmag < 1) throw std::logic_error("obstruction_scan: value below the product-formula floor");
                ++scan.values_seen;
                if (scan.empty || maxmag < scan.min_max_magnitude) {
                    scan.empty = false;
                    scan.min_max_magnitude = maxmag;
                    scan.argmin.assign(n, Rat(0));
                    for (int i = 0; i < n; ++i) scan.argmin[i] = Rat(int_of(y[i])) / Rat(den);
                }
            }
            int k = 0;
            while (k < n && y[k] == height) { y[k] = -height; ++k; }
            if (k == n) break;
            ++y[k];
        }
    }
    return scan;
}

}  // namespace oppairs
