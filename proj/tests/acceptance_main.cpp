// Acceptance gate: one line per criterion, exit 0 only when all pass.
// usage: oppairs_acceptance <cli-binary> <fixtures-dir> <tmp-dir>

#include "io/instance_io.hpp"
#include "io/report.hpp"
#include "local/hilbert.hpp"
#include "local/isotropy.hpp"
#include "oracles.hpp"
#include "search/search.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace oppairs;

namespace {

std::string g_cli, g_fixtures, g_tmp;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// returns the child's exit code; -1 for spawn failure or abnormal exit
int run_cli(const std::string& args, const std::string& tag) {
    std::string cmd = "\"" + g_cli + "\" " + args + " > \"" + g_tmp + "/" + tag + ".stdout\" 2> \"" +
                      g_tmp + "/" + tag + ".stderr\"";
    int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

long long run_criterion(int number, const std::function<Outcome()>& body, long long limit_ms,
                        bool& all_pass) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome oc;
    try {
        oc = body();
    } catch (const std::exception& e) {
        oc.pass = false;
        oc.detail = std::string("exception: ") + e.what();
    }
    long long ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    if (oc.pass && limit_ms > 0 && ms >= limit_ms) {
        oc.pass = false;
        oc.detail += " [exceeded " + std::to_string(limit_ms) + " ms]";
    }
    std::cout << "criterion " << number << ": " << (oc.pass ? "PASS" : "FAIL") << " — " << oc.detail
              << " (" << ms << " ms)\n";
    if (!oc.pass) all_pass = false;
    return ms;
}

EpsMap eps_from_row(const Json& row) {
    EpsMap e;
    e.arch = parse_rat(row.at("eps_arch").get<std::string>());
    for (const auto& [key, value] : row.at("eps_p").items())
        e.finite[std::stoll(key)] = parse_rat(value.get<std::string>());
    return e;
}

Vec<Rat> x_from_row(const Json& row) {
    Vec<Rat> x;
    for (const Json& xi : row.at("x")) x.push_back(parse_rat(xi.get<std::string>()));
    return x;
}

// ---- 1: Hilbert symbol vs the exhaustive solvability oracle ----

Outcome crit_hilbert() {
    long long checked = 0;
    for (long long p : {2LL, 3LL, 5LL, 7LL, 11LL}) {
        std::set<long long> vals;
        for (long long v : {1LL, 2LL, 3LL, 5LL, 7LL, 10LL, p, 2 * p}) {
            vals.insert(v);
            vals.insert(-v);
        }
        for (long long a : vals)
            for (long long b : vals) {
                int sym = hilbert_symbol(Rat(static_cast<long>(a)), Rat(static_cast<long>(b)),
                                         PlaceId::finite(p));
                bool solvable = oracles::hilbert_oracle(a, b, p);
                ++checked;
                if ((sym == 1) != solvable) {
                    std::ostringstream os;
                    os << "(" << a << "," << b << ")_" << p << " = " << sym
                       << " but the oracle says " << (solvable ? "solvable" : "unsolvable");
                    return {false, os.str()};
                }
            }
    }
    return {true, std::to_string(checked) + " symbol values agree with brute force"};
}

// ---- 2: p-adic isotropy vs exhaustive counting on random diagonal forms ----

Outcome crit_isotropy() {
    std::mt19937_64 rng(1202);
    long long checked = 0;
    for (long long p : {2LL, 3LL, 5LL}) {
        const long long entries[] = {1, -1, 2, -2, 3, -3, 5, -5, p, -p};
        for (int t = 0; t < 200; ++t) {
            int dim = 2 + static_cast<int>(rng() % 4);
            std::vector<long long> d(dim);
            for (auto& e : d) e = entries[rng() % 10];
            QuadForm<Rat> q(dim);
            for (int i = 0; i < dim; ++i) q.c[i][i] = Rat(static_cast<long>(d[i]));
            IsotropyVerdict got = is_isotropic_finite(q, p);
            bool want = oracles::isotropy_oracle_diag(d, p);
            ++checked;
            if (got.isotropic != want) {
                std::ostringstream os;
                os << "diag(";
                for (int i = 0; i < dim; ++i) os << (i ? "," : "") << d[i];
                os << ") at p=" << p << ": verdict " << got.isotropic << ", oracle " << want;
                return {false, os.str()};
            }
            if (got.exact_vector && !(eval_quad(q, *got.exact_vector) == Rat(0)))
                return {false, "exact vector does not evaluate to zero"};
        }
    }
    return {true, std::to_string(checked) + " random diagonal forms agree with counting"};
}

// ---- 3: hypothesis check on the bundled instance ----

Outcome crit_check_pass() {
    int code = run_cli("check --instance \"" + g_fixtures + "/i1.json\" --out \"" + g_tmp + "/c3.jsonl\"",
                       "c3");
    if (code != 0) return {false, "check exited " + std::to_string(code)};
    Report rep = parse_report_jsonl(read_file(g_tmp + "/c3.jsonl"));
    if (rep.status != "ok" || rep.exit_code != 0) return {false, "report status " + rep.status};
    int pass_verdicts = 0;
    bool q0_null = false;
    for (const Json& row : rep.rows) {
        std::string kind = row.value("kind", "");
        if ((kind == "place" || kind == "pencil") && row.value("verdict", "") == "PASS") ++pass_verdicts;
        if (kind == "pencil") q0_null = row.at("common_q0").is_null();
        if (kind == "verdict" &&
            (row.value("cond1", "") != "PASS" || row.value("cond2", "") != "PASS" ||
             row.value("cond3", "") != "PASS"))
            return {false, "a condition verdict is not PASS"};
    }
    if (pass_verdicts != 3) return {false, "expected 3 per-row PASS verdicts"};
    if (!q0_null) return {false, "pencil intersection unexpectedly nonempty"};
    return {true, "exit 0, all verdicts PASS, no common rational form"};
}

// ---- 4: epsilon schedule on the bundled instance, every row witnessed ----

const char* kExperimentArgs =
    " --eps-arch 1,1/2,1/10,1/100 --eps-p 5=1/5,5=1/25 --budget 10000000";

Outcome crit_experiment() {
    int code = run_cli("experiment --instance \"" + g_fixtures + "/i1.json\"" + kExperimentArgs +
                           " --out \"" + g_tmp + "/c4.jsonl\"",
                       "c4");
    if (code != 0) return {false, "experiment exited " + std::to_string(code)};
    Report rep = parse_report_jsonl(read_file(g_tmp + "/c4.jsonl"));
    if (rep.rows.size() != 8) return {false, std::to_string(rep.rows.size()) + " rows, expected 8"};
    PairInstance inst = parse_instance(read_file(g_fixtures + "/i1.json"));
    for (const Json& row : rep.rows) {
        if (!row.value("found", false)) return {false, "a schedule row found no witness"};
        long long steps = row.at("steps").get<long long>();
        if (steps > 10000000) return {false, "row exceeded the step budget"};
        VerifyResult vr = verify_witness(inst, x_from_row(row), eps_from_row(row));
        if (!vr.witness || !vr.violations.empty())
            return {false, "a reported witness fails exact re-verification"};
    }
    return {true, "8/8 rows witnessed within budget and re-verified exactly"};
}

// ---- 5: rational control fails the check and shows the magnitude floor ----

Outcome crit_control() {
    int code = run_cli("check --instance \"" + g_fixtures + "/rational_control.json\" --out \"" +
                           g_tmp + "/c5check.jsonl\"",
                       "c5check");
    if (code != 2) return {false, "control check exited " + std::to_string(code) + ", expected 2"};
    code = run_cli("obstruct --instance \"" + g_fixtures + "/rational_control.json\" --height 20 --out \"" +
                       g_tmp + "/c5scan.jsonl\"",
                   "c5scan");
    if (code != 0) return {false, "obstruction scan exited " + std::to_string(code)};
    Report rep = parse_report_jsonl(read_file(g_tmp + "/c5scan.jsonl"));
    if (rep.rows.size() != 1) return {false, "expected one scan row"};
    const Json& row = rep.rows[0];
    if (row.value("empty", true)) return {false, "scan saw no nonzero values"};
    if (row.at("min_max_magnitude").get<std::string>() != "1")
        return {false, "minimum max-place magnitude is " +
                           row.at("min_max_magnitude").get<std::string>() + ", expected exactly 1"};
    return {true, "check exits 2; height-20 scan floor is exactly 1"};
}

// ---- 6: normal form of seeded rational pairs, exact change of basis ----

Outcome crit_normal_form() {
    std::mt19937_64 rng(4242);
    auto draw = [&] { return static_cast<int>(rng() % 7) - 3; };  // [-3, 3]
    int successes = 0, attempts = 0;
    while (successes < 100) {
        if (++attempts > 20000) return {false, "sampling cap hit before 100 pairs"};

        Vec<Rat> w(4);
        bool wzero = true;
        for (auto& wi : w) {
            wi = Rat(draw());
            if (sgn(wi) != 0) wzero = false;
        }
        if (wzero) continue;

        // L vanishing on w: solve for the coefficient at a nonzero coordinate
        Vec<Rat> lc(4);
        for (auto& li : lc) li = Rat(draw());
        int pivot = 0;
        while (sgn(w[pivot]) == 0) ++pivot;
        Rat dotrest(0);
        for (int i = 0; i < 4; ++i)
            if (i != pivot) dotrest += lc[i] * w[i];
        lc[pivot] = -dotrest / w[pivot];
        LinForm<Rat> l{lc};
        if (l.is_zero()) continue;

        // Q vanishing on w: solve for the diagonal coefficient at that coordinate
        QuadForm<Rat> q(4);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) q.c[i][j] = Rat(draw());
        Rat rest(0);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                if (!(i == pivot && j == pivot)) rest += q.c[i][j] * w[i] * w[j];
        q.c[pivot][pivot] = -rest / (w[pivot] * w[pivot]);
        if (!is_nondegenerate(q)) continue;
        if (!is_nondegenerate(restrict_quad(q, kernel_basis(l)))) continue;

        auto nf = normal_form_pair(q, l);
        if (!nf) return {false, "no normal form despite a planted isotropic vector"};
        QuadForm<Rat> target(4);
        target.c[0][1] = Rat(1);
        target.c[2][2] = nf->a3;
        target.c[3][3] = nf->a4;
        if (!(quad_compose(q, nf->g).c == target.c))
            return {false, "transported form differs from x1x2 + a3 x3^2 + a4 x4^2"};
        Vec<Rat> e4{Rat(0), Rat(0), Rat(0), Rat(1)};
        if (!(lin_compose(l, nf->g).c == e4)) return {false, "transported L is not x4"};
        if (sgn(nf->a3) == 0 || sgn(nf->a4) == 0) return {false, "degenerate normal form entries"};
        ++successes;
    }
    return {true, "100 seeded pairs normalized with exact transport (" +
                      std::to_string(attempts) + " attempts)"};
}

// ---- 7: dimension reduction on the bundled five-variable instance ----

Outcome crit_reduce() {
    PairInstance big = parse_instance(read_file(g_fixtures + "/i1_dim5.json"));
    SearchBudget budget;
    budget.max_steps = 10000;
    auto rr = reduce_dimension(big, budget);
    if (!rr) return {false, "no passing hyperplane within 10000 samples"};
    if (rr->restricted.n != 4) return {false, "restricted dimension is not 4"};
    if (!check_hypotheses(rr->restricted).pass()) return {false, "restricted pair fails the check"};
    return {true, "hyperplane found after " + std::to_string(rr->samples) + " samples"};
}

// ---- 8: exact scaling law on every criterion-4 witness ----

Outcome crit_scaling() {
    Report rep = parse_report_jsonl(read_file(g_tmp + "/c4.jsonl"));
    PairInstance inst = parse_instance(read_file(g_fixtures + "/i1.json"));
    EpsMap loose;
    loose.arch = Rat(pow_int(10, 12));
    loose.finite[5] = Rat(pow_int(5, 12));
    auto mags = [&](const Vec<Rat>& v) {
        VerifyResult vr = verify_witness(inst, v, loose);
        if (!vr.witness) throw std::runtime_error("loose verification failed");
        return *vr.witness;
    };
    auto at = [](const Witness& w, bool arch) -> const PlaceMagnitudes& {
        for (const PlaceMagnitudes& pm : w.places)
            if (pm.place.archimedean == arch) return pm;
        throw std::runtime_error("place missing");
    };
    int witnesses = 0;
    for (const Json& row : rep.rows) {
        if (!row.value("found", false)) return {false, "row without witness"};
        Vec<Rat> x = x_from_row(row);
        Witness base = mags(x);
        for (int dir : {1, -1}) {
            Rat f = dir > 0 ? Rat(5) : Rat(1, 5);
            Vec<Rat> y(x.size());
            for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] * f;
            Witness scaled = mags(y);
            Rat qf = dir > 0 ? Rat(1, 25) : Rat(25);
            Rat lf = dir > 0 ? Rat(1, 5) : Rat(5);
            if (!(at(scaled, false).q_abs == at(base, false).q_abs * qf))
                return {false, "|Q|_5 did not scale by p^{-2 sgn}"};
            if (!(at(scaled, false).l_abs == at(base, false).l_abs * lf))
                return {false, "|L|_5 did not scale by p^{-sgn}"};
            Rat qa = dir > 0 ? Rat(25) : Rat(1, 25);
            Rat la = dir > 0 ? Rat(5) : Rat(1, 5);
            if (!(at(scaled, true).q_value == at(base, true).q_value * ExtReal(qa)))
                return {false, "|Q|_inf did not scale by p^{2 sgn}"};
            if (!(at(scaled, true).l_value == at(base, true).l_value * ExtReal(la)))
                return {false, "|L|_inf did not scale by p^{sgn}"};
        }
        ++witnesses;
    }
    return {true, std::to_string(witnesses) + " witnesses satisfy the exact p-scaling law both ways"};
}

// ---- 9: byte-stable reports modulo the elapsed-time field ----

Outcome crit_determinism() {
    int code = run_cli("experiment --instance \"" + g_fixtures + "/i1.json\"" + kExperimentArgs +
                           " --out \"" + g_tmp + "/c9.jsonl\"",
                       "c9");
    if (code != 0) return {false, "second run exited " + std::to_string(code)};
    std::istringstream a(read_file(g_tmp + "/c4.jsonl")), b(read_file(g_tmp + "/c9.jsonl"));
    std::string la, lb;
    int lines = 0;
    while (true) {
        bool ga = static_cast<bool>(std::getline(a, la));
        bool gb = static_cast<bool>(std::getline(b, lb));
        if (ga != gb) return {false, "reports differ in length"};
        if (!ga) break;
        Json ja = Json::parse(la), jb = Json::parse(lb);
        ja.erase("elapsed_ms");
        jb.erase("elapsed_ms");
        if (ja.dump() != jb.dump())
            return {false, "line " + std::to_string(lines + 1) + " differs between runs"};
        ++lines;
    }
    return {true, std::to_string(lines) + " report lines identical modulo elapsed_ms"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: oppairs_acceptance <cli-binary> <fixtures-dir> <tmp-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];
    g_tmp = argv[3];
    std::filesystem::create_directories(g_tmp);

    bool all = true;
    run_criterion(1, crit_hilbert, 120000, all);
    run_criterion(2, crit_isotropy, 300000, all);
    run_criterion(3, crit_check_pass, 1000, all);
    run_criterion(4, crit_experiment, 600000, all);
    run_criterion(5, crit_control, 0, all);
    run_criterion(6, crit_normal_form, 0, all);
    run_criterion(7, crit_reduce, 0, all);
    run_criterion(8, crit_scaling, 0, all);
    run_criterion(9, crit_determinism, 0, all);

    std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES above") << "\n";
    return all ? 0 : 1;
}
