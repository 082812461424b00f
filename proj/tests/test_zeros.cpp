#include "doctest.h"

#include "zeros/zeros.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

using namespace oppairs;

namespace {

QuadForm<Rat> hyp_plus() {
    QuadForm<Rat> q(4);
    q.c[0][1] = 1;
    q.c[2][2] = 1;
    q.c[3][3] = -1;
    return q;
}

LinForm<Rat> coord(int n, int i) {
    Vec<Rat> c(n, Rat(0));
    c[i] = 1;
    return LinForm<Rat>(std::move(c));
}

std::vector<Int> zi(std::initializer_list<long> v) {
    std::vector<Int> r;
    for (long x : v) r.push_back(Int(x));
    return r;
}

bool val_ge(const Rat& x, long long p, long m) {
    Valuation v = padic_valuation(x, p);
    return v.infinite || v.v >= m;
}

Vec<Rat> to_rat(const std::vector<Int>& z) {
    Vec<Rat> x;
    for (const Int& c : z) x.push_back(Rat(c));
    return x;
}

// I1-shaped instance assembled in code (the io suite covers the fixtures)
PairInstance i1_like() {
    PairInstance inst;
    inst.label = "i1-code";
    inst.n = 4;
    inst.d = 2;
    inst.q_arch = QuadForm<ExtReal>(4);
    inst.q_arch.c[0][1] = ExtReal(1);
    inst.q_arch.c[2][2] = ExtReal(Rat(0), Rat(1), 2);
    inst.q_arch.c[3][3] = ExtReal(-1);
    inst.l_arch = LinForm<ExtReal>({ExtReal(0), ExtReal(0), ExtReal(0), ExtReal(1)});
    inst.finite.push_back({5, hyp_plus(), coord(4, 3)});
    return inst;
}

}  // namespace

TEST_SUITE("zeros") {

TEST_CASE("primitive projective zeros mod p") {
    auto zs = zeros_mod_p(hyp_plus(), coord(4, 3), 5);
    CHECK(std::is_sorted(zs.begin(), zs.end()));
    auto has = [&](const std::vector<Int>& v) { return std::find(zs.begin(), zs.end(), v) != zs.end(); };
    CHECK(has(zi({1, 0, 0, 0})));
    CHECK(has(zi({0, 1, 0, 0})));
    for (const auto& z : zs) {
        bool unit = false;
        for (const Int& c : z) unit = unit || c % 5 != 0;
        CHECK(unit);
        CHECK(val_ge(eval_quad(hyp_plus(), to_rat(z)), 5, 1));
        CHECK(val_ge(eval_lin(coord(4, 3), to_rat(z)), 5, 1));
    }

    QuadForm<Rat> anis(2);  // x1^2 + x2^2, -1 a non-residue mod 3
    anis.c[0][0] = 1;
    anis.c[1][1] = 1;
    CHECK(zeros_mod_p(anis, coord(2, 1), 3).empty());

    QuadForm<Rat> q3(4);  // x1 x2 + x3^2
    q3.c[0][1] = 1;
    q3.c[2][2] = 1;
    CHECK(std::find(zeros_mod_p(q3, coord(4, 3), 5).begin(), zeros_mod_p(q3, coord(4, 3), 5).end(),
                    zi({1, 4, 1, 0})) != zeros_mod_p(q3, coord(4, 3), 5).end());

    QuadForm<Rat> badden(2);
    badden.c[0][0] = Rat(1, 5);
    badden.c[1][1] = 1;
    CHECK_THROWS_AS(zeros_mod_p(badden, coord(2, 1), 5), std::invalid_argument);
}

TEST_CASE("hensel lifting") {
    QuadForm<Rat> q = hyp_plus();
    LinForm<Rat> l = coord(4, 3);

    // an exact zero is a fixed point of the refinement
    auto cert = certificate_from_class(q, &l, 5, zi({1, 0, 0, 0}), 1);
    REQUIRE(cert.has_value());
    CHECK(hensel_lift(q, &l, *cert, 2) == zi({1, 0, 0, 0}));

    // (1, -1, 1, 0) refined to three digits
    auto cert2 = certificate_from_class(q, &l, 5, zi({1, 4, 1, 0}), 1);
    REQUIRE(cert2.has_value());
    auto v = hensel_lift(q, &l, *cert2, 3);
    for (int i = 0; i < 4; ++i) CHECK((v[i] - zi({1, 4, 1, 0})[i]) % 5 == 0);
    CHECK(val_ge(eval_quad(q, to_rat(v)), 5, 3));
    CHECK(val_ge(eval_lin(l, to_rat(v)), 5, 3));

    // gradient vanishing mod p: no certificate, invalid ones rejected
    QuadForm<Rat> s(2);  // 5 x1^2 + x2^2 at (1, 0)
    s.c[0][0] = 5;
    s.c[1][1] = 1;
    CHECK(!certificate_from_class(s, nullptr, 5, zi({1, 0}), 1).has_value());
    ZeroCertificate bad;
    bad.p = 5;
    bad.precision = 1;
    bad.z = zi({1, 0});
    bad.newton_index = 0;
    bad.nu = 1;
    CHECK_THROWS_AS(hensel_lift(s, nullptr, bad, 3), std::domain_error);
}

TEST_CASE("smooth local zeros by iterative deepening") {
    QuadForm<Rat> q3(3);  // x1 x2 + x3^2 is 5-adically isotropic
    q3.c[0][1] = 1;
    q3.c[2][2] = 1;
    auto cert = smooth_local_zero(q3, 5, 6);
    REQUIRE(cert.has_value());
    auto v = hensel_lift(q3, nullptr, *cert, 4);
    CHECK(val_ge(eval_quad(q3, to_rat(v)), 5, 4));

    QuadForm<Rat> quat(4);  // sum of four squares: anisotropic over Q_2
    for (int i = 0; i < 4; ++i) quat.c[i][i] = 1;
    CHECK(!smooth_local_zero(quat, 2, 7).has_value());
}

TEST_CASE("precision from the strict epsilon bound") {
    CHECK(precision_for_eps(Rat(1, 25), 5) == 3);
    CHECK(precision_for_eps(Rat(1, 5), 5) == 2);
    CHECK(precision_for_eps(Rat(1), 5) == 1);
    CHECK(precision_for_eps(Rat(1, 20), 5) == 3);
    CHECK(precision_for_eps(Rat(1, 26), 5) == 4);
}

TEST_CASE("congruence stream on a single place") {
    PairInstance inst = i1_like();
    std::map<long long, int> prec{{5, 2}};
    CongruenceStream st = congruence_classes(inst, prec, 64);
    CHECK(!st.provably_empty);
    REQUIRE(!st.classes.empty());
    bool lift_of_11410 = false;
    for (const CongruenceClass& cls : st.classes) {
        CHECK(cls.modulus == 25);
        bool unit = false;
        for (const Int& c : cls.residue) unit = unit || c % 5 != 0;
        CHECK(unit);
        CHECK(val_ge(eval_quad(hyp_plus(), to_rat(cls.residue)), 5, 2));
        CHECK(val_ge(eval_lin(coord(4, 3), to_rat(cls.residue)), 5, 2));
        std::vector<Int> red;
        for (const Int& c : cls.residue) red.push_back(c % 5);
        if (red == zi({1, 4, 1, 0})) lift_of_11410 = true;
    }
    CHECK(lift_of_11410);

    CongruenceStream one = congruence_classes(inst, prec, 1);
    CHECK(one.classes.size() == 1);
    CHECK(one.truncated);
}

TEST_CASE("stream equals exhaustive enumeration at two digits") {
    PairInstance inst = i1_like();
    std::map<long long, int> prec{{5, 2}};
    CongruenceStream st = congruence_classes(inst, prec, 100000);
    CHECK(!st.truncated);
    std::set<std::vector<Int>> got;
    for (const CongruenceClass& cls : st.classes) got.insert(cls.residue);

    std::set<std::vector<Int>> want;
    const long long m = 25;
    std::vector<long long> x(4, 0);
    while (true) {
        long long qv = (x[0] * x[1] + x[2] * x[2] - x[3] * x[3]) % m;
        if (qv < 0) qv += m;
        bool unit = x[0] % 5 || x[1] % 5 || x[2] % 5 || x[3] % 5;
        if (unit && qv == 0 && x[3] % m == 0) {
            std::vector<Int> z = {Int(static_cast<long>(x[0])), Int(static_cast<long>(x[1])),
                                  Int(static_cast<long>(x[2])), Int(static_cast<long>(x[3]))};
            // same canonical representative the stream uses
            for (size_t i = 0; i < 4; ++i) {
                if (z[i] % 5 == 0) continue;
                Int inv, mod = int_of(m);
                mpz_invert(inv.get_mpz_t(), z[i].get_mpz_t(), mod.get_mpz_t());
                for (Int& c : z) c = c * inv % mod;
                break;
            }
            want.insert(z);
        }
        int i = 3;
        while (i >= 0 && x[i] == m - 1) x[i--] = 0;
        if (i < 0) break;
        ++x[i];
    }
    CHECK(got == want);
}

TEST_CASE("stream combines places by CRT") {
    PairInstance inst = i1_like();
    inst.finite.push_back({7, hyp_plus(), coord(4, 3)});
    std::map<long long, int> prec{{5, 1}, {7, 1}};
    CongruenceStream st = congruence_classes(inst, prec, 2000);
    CHECK(!st.provably_empty);
    CHECK(!st.truncated);
    REQUIRE(!st.classes.empty());
    auto z5 = zeros_mod_p(hyp_plus(), coord(4, 3), 5);
    auto z7 = zeros_mod_p(hyp_plus(), coord(4, 3), 7);
    CHECK(st.classes.size() == z5.size() * z7.size());
    for (const CongruenceClass& cls : st.classes) {
        CHECK(cls.modulus == 35);
        std::vector<Int> r5, r7;
        for (const Int& c : cls.residue) {
            r5.push_back(c % 5);
            r7.push_back(c % 7);
        }
        CHECK(std::find(z5.begin(), z5.end(), r5) != z5.end());
        CHECK(std::find(z7.begin(), z7.end(), r7) != z7.end());
    }
}

TEST_CASE("no mod-p solution is reported as provably empty") {
    PairInstance inst;
    inst.label = "empty";
    inst.n = 4;
    inst.d = 2;
    inst.q_arch = QuadForm<ExtReal>(4);
    inst.q_arch.c[0][0] = ExtReal(1);
    inst.q_arch.c[1][1] = ExtReal(1);
    inst.q_arch.c[2][2] = ExtReal(1);
    inst.q_arch.c[3][3] = ExtReal(1);
    inst.l_arch = LinForm<ExtReal>({ExtReal(0), ExtReal(0), ExtReal(0), ExtReal(1)});
    QuadForm<Rat> q(4);  // x1^2 + x2^2 + 3 x3^2 with x4 pinned: anisotropic mod 3
    q.c[0][0] = 1;
    q.c[1][1] = 1;
    q.c[2][2] = 3;
    q.c[3][3] = 1;
    inst.finite.push_back({3, q, coord(4, 3)});
    std::map<long long, int> prec{{3, 2}};
    CongruenceStream st = congruence_classes(inst, prec, 16);
    CHECK(st.provably_empty);
    CHECK(st.classes.empty());
}

TEST_CASE("multiplier closure under scaling by p") {
    PairInstance inst = i1_like();
    std::map<long long, int> prec{{5, 2}};
    CongruenceStream st = congruence_classes(inst, prec, 16);
    for (const CongruenceClass& cls : st.classes) {
        Vec<Rat> x5;
        for (const Int& c : cls.residue) x5.push_back(Rat(c) * 5);
        CHECK(val_ge(eval_quad(hyp_plus(), x5), 5, 4));  // m + 2
        CHECK(val_ge(eval_lin(coord(4, 3), x5), 5, 3));  // m + 1
    }
}

}  // TEST_SUITE
