#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oppairs {

namespace {

std::vector<Rat> parse_eps_list(const Json& v, const std::string& what) {
    std::vector<Rat> out;
    auto one = [&](const Json& e) {
        if (!e.is_string()) throw std::invalid_argument(what + ": expected rational strings");
        Rat r = parse_rat(e.get<std::string>());
        if (sgn(r) <= 0) throw std::invalid_argument(what + ": bounds must be positive");
        out.push_back(r);
    };
    if (v.is_array())
        for (const Json& e : v) one(e);
    else
        one(v);
    if (out.empty()) throw std::invalid_argument(what + ": empty list");
    return out;
}

Json witness_row(const EpsMap& eps, bool found, long long steps, bool reused, const std::string& strategy,
                 const std::optional<Witness>& w) {
    Json row = Json::object();
    row["eps_arch"] = emit_rat(eps.arch);
    Json ep = Json::object();
    for (const auto& [p, e] : eps.finite) ep[std::to_string(p)] = emit_rat(e);
    row["eps_p"] = ep;
    row["found"] = found;
    row["steps"] = steps;
    row["reused"] = reused;
    row["strategy"] = strategy;
    if (w) {
        Json x = Json::array();
        for (const Rat& xi : w->x) x.push_back(emit_rat(xi));
        row["x"] = x;
        Json mags = Json::object();
        for (const PlaceMagnitudes& pm : w->places) {
            Json m = Json::object();
            if (pm.place.archimedean) {
                m["q"] = emit_ext(pm.q_value);
                m["l"] = emit_ext(pm.l_value);
            } else {
                m["q"] = emit_rat(pm.q_abs);
                m["l"] = emit_rat(pm.l_abs);
            }
            m["q_exact_zero"] = pm.q_exact_zero;
            m["l_exact_zero"] = pm.l_exact_zero;
            mags[place_name(pm.place)] = m;
        }
        row["magnitudes"] = mags;
        Json tr = Json::array();
        for (const std::string& line : w->transcript) tr.push_back(line);
        row["transcript"] = tr;
    }
    return row;
}

Json quad_rows(const QuadForm<Rat>& q) {
    Json rows = Json::array();
    for (int i = 0; i < q.n; ++i) {
        Json row = Json::array();
        for (int j = i; j < q.n; ++j) row.push_back(emit_rat(q.c[i][j]));
        rows.push_back(row);
    }
    return rows;
}

Json check_rows(const HypothesisReport& hr) {
    Json rows = Json::array();
    for (const PlaceHypotheses& ph : hr.places) {
        Json row = Json::object();
        row["kind"] = "place";
        row["place"] = place_name(ph.place);
        row["q_nondegenerate"] = ph.q_nondegenerate;
        row["restriction_nondegenerate"] = ph.restriction_nondegenerate;
        row["restriction_isotropic"] = ph.restriction_isotropy.isotropic;
        row["criterion"] = ph.restriction_isotropy.criterion;
        if (ph.restriction_isotropy.exact_vector) {
            Json v = Json::array();
            for (const Rat& c : *ph.restriction_isotropy.exact_vector) v.push_back(emit_rat(c));
            row["isotropy_vector"] = v;
        }
        if (ph.restriction_isotropy.hensel) {
            const ZeroCertificate& zc = *ph.restriction_isotropy.hensel;
            Json cert = Json::object();
            cert["p"] = zc.p;
            cert["precision"] = zc.precision;
            Json z = Json::array();
            for (const Int& zi : zc.z) z.push_back(zi.get_str());
            cert["z"] = z;
            cert["nu"] = zc.nu;
            row["hensel_certificate"] = cert;
        }
        bool ok = ph.q_nondegenerate && ph.restriction_nondegenerate && ph.restriction_isotropy.isotropic;
        row["verdict"] = ok ? "PASS" : "FAIL";
        rows.push_back(row);
    }

    const PencilReport& pr = hr.pencil;
    Json prow = Json::object();
    prow["kind"] = "pencil";
    prow["irrational"] = pr.irrational;
    prow["locus_intersection_dim"] = pr.common_dim;
    if (pr.common_q0)
        prow["common_q0"] = quad_rows(*pr.common_q0);
    else
        prow["common_q0"] = nullptr;
    Json sp = Json::array(), tp = Json::array();
    for (const PlaceId& s : pr.s_prime) sp.push_back(place_name(s));
    for (const PlaceId& s : pr.t_places) tp.push_back(place_name(s));
    prow["s_prime"] = sp;
    prow["t_places"] = tp;
    prow["fails_units_reading"] = pr.fails_units_reading;
    prow["fails_not_both_zero_reading"] = pr.fails_not_both_zero_reading;
    Json pls = Json::array();
    for (const PencilPlaceReport& pp : pr.places) {
        Json e = Json::object();
        e["place"] = place_name(pp.place);
        e["locus_everything"] = pp.locus_everything;
        e["locus_dim"] = pp.w_dim;
        e["alpha_blocked"] = pp.alpha_blocked;
        Json basis = Json::array();
        for (const auto& [a, b] : pp.locus_basis) basis.push_back(Json::array({emit_ext(a), emit_ext(b)}));
        e["locus_basis"] = basis;
        pls.push_back(e);
    }
    prow["places"] = pls;
    prow["verdict"] = pr.irrational ? "PASS" : "FAIL";
    rows.push_back(prow);

    Json verdict = Json::object();
    verdict["kind"] = "verdict";
    verdict["cond1"] = hr.cond1 ? "PASS" : "FAIL";
    verdict["cond2"] = hr.cond2 ? "PASS" : "FAIL";
    verdict["cond3"] = hr.cond3 ? "PASS" : "FAIL";
    verdict["pass"] = hr.pass();
    rows.push_back(verdict);
    return rows;
}

std::vector<EpsMap> build_schedule(const PairInstance& inst, const RunConfig& cfg) {
    if (cfg.eps_arch.empty()) throw std::invalid_argument("no archimedean epsilon given");
    std::vector<long long> primes;
    for (const FinitePlacePair& fp : inst.finite) primes.push_back(fp.p);
    std::sort(primes.begin(), primes.end());
    std::vector<const std::vector<Rat>*> lists{&cfg.eps_arch};
    for (long long p : primes) {
        auto it = cfg.eps_p.find(p);
        if (it == cfg.eps_p.end() || it->second.empty())
            throw std::invalid_argument("no epsilon given for place " + std::to_string(p));
        lists.push_back(&it->second);
    }
    for (const auto& [p, list] : cfg.eps_p)
        if (std::find(primes.begin(), primes.end(), p) == primes.end())
            throw std::invalid_argument("epsilon names a place outside the instance: " + std::to_string(p));

    std::vector<EpsMap> schedule;
    std::vector<size_t> idx(lists.size(), 0);
    while (true) {
        EpsMap e;
        e.arch = (*lists[0])[idx[0]];
        for (size_t i = 0; i < primes.size(); ++i) e.finite[primes[i]] = (*lists[i + 1])[idx[i + 1]];
        schedule.push_back(std::move(e));
        size_t k = lists.size();
        while (k > 0 && ++idx[k - 1] == lists[k - 1]->size()) idx[--k] = 0, idx[k] = 0;
        if (k == 0) break;
    }
    return schedule;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("run config: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("run config: expected a JSON object");

    RunConfig cfg;
    if (!doc.contains("mode") || !doc["mode"].is_string())
        throw std::invalid_argument("run config: missing mode");
    cfg.mode = doc["mode"].get<std::string>();
    static const std::set<std::string> modes{"check", "search", "experiment", "reduce", "obstruct"};
    if (!modes.count(cfg.mode)) throw std::invalid_argument("run config: unknown mode " + cfg.mode);

    if (doc.contains("eps_arch")) cfg.eps_arch = parse_eps_list(doc["eps_arch"], "eps_arch");
    if (doc.contains("eps_p")) {
        if (!doc["eps_p"].is_object()) throw std::invalid_argument("eps_p: expected an object keyed by prime");
        for (const auto& [key, value] : doc["eps_p"].items()) {
            long long p;
            try {
                size_t pos = 0;
                p = std::stoll(key, &pos);
                if (pos != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw std::invalid_argument("eps_p: bad prime key " + key);
            }
            cfg.eps_p[p] = parse_eps_list(value, "eps_p[" + key + "]");
        }
    }
    if (doc.contains("budget")) {
        const Json& b = doc["budget"];
        if (!b.is_object()) throw std::invalid_argument("budget: expected an object");
        if (b.contains("max_steps")) cfg.budget.max_steps = b["max_steps"].get<long long>();
        if (b.contains("max_classes")) cfg.budget.max_classes = b["max_classes"].get<long long>();
        if (b.contains("wall_ms")) cfg.budget.wall_ms = b["wall_ms"].get<long long>();
        if (b.contains("seed")) cfg.budget.seed = b["seed"].get<long long>();
        if (cfg.budget.max_steps < 0 || cfg.budget.max_classes < 1 || cfg.budget.wall_ms < 0)
            throw std::invalid_argument("budget: values out of range");
    }
    if (doc.contains("override_hypotheses")) cfg.override_hypotheses = doc["override_hypotheses"].get<bool>();
    if (doc.contains("height")) {
        cfg.height = doc["height"].get<long long>();
        if (cfg.height < 0) throw std::invalid_argument("height must be nonnegative");
    }
    if (doc.contains("format")) {
        cfg.format = doc["format"].get<std::string>();
        if (cfg.format != "json" && cfg.format != "csv")
            throw std::invalid_argument("format must be json or csv");
    }
    return cfg;
}

Report run_instance(const PairInstance& inst, const RunConfig& cfg) {
    Report rep;
    rep.instance_digest = instance_digest(inst);
    rep.mode = cfg.mode;
    auto started = std::chrono::steady_clock::now();
    auto finish = [&](Report& r) {
        r.elapsed_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
                .count();
        return r;
    };

    try {
        if (cfg.mode == "check") {
            HypothesisReport hr = check_hypotheses(inst);
            rep.rows = check_rows(hr).get<std::vector<Json>>();
            if (!hr.pass()) {
                rep.status = "hypothesis-fail";
                rep.exit_code = 2;
            }
        } else if (cfg.mode == "search") {
            std::vector<EpsMap> schedule = build_schedule(inst, cfg);
            if (schedule.size() != 1)
                throw std::invalid_argument("search takes a single epsilon per place");
            SearchOutcome so = search_witness(inst, schedule[0], cfg.budget, cfg.override_hypotheses);
            rep.rows.push_back(
                witness_row(schedule[0], so.witness.has_value(), so.steps, false, so.strategy, so.witness));
            if (!so.witness) {
                rep.status = "exhausted";
                rep.exit_code = 3;
            }
        } else if (cfg.mode == "experiment") {
            std::vector<EpsMap> schedule = build_schedule(inst, cfg);
            ExperimentReport er = epsilon_experiment(inst, schedule, cfg.budget, cfg.override_hypotheses);
            bool all = true;
            for (const ExperimentRow& row : er.rows) {
                rep.rows.push_back(witness_row(row.eps, row.witness.has_value(), row.steps, row.reused,
                                               row.strategy, row.witness));
                all = all && row.witness.has_value();
            }
            if (!all) {
                rep.status = "exhausted";
                rep.exit_code = 3;
            }
        } else if (cfg.mode == "reduce") {
            std::optional<ReductionResult> rr = reduce_dimension(inst, cfg.budget);
            Json row = Json::object();
            row["kind"] = "reduction";
            row["found"] = rr.has_value();
            if (rr) {
                Json f = Json::array();
                for (const Rat& c : rr->functional) f.push_back(emit_rat(c));
                row["functional"] = f;
                row["samples"] = rr->samples;
                row["restricted"] = Json::parse(emit_instance(rr->restricted));
            }
            rep.rows.push_back(row);
            if (!rr) {
                rep.status = "exhausted";
                rep.exit_code = 3;
            }
        } else if (cfg.mode == "obstruct") {
            ObstructionScan scan = obstruction_scan(inst, cfg.height);
            Json row = Json::object();
            row["kind"] = "obstruction";
            row["height"] = cfg.height;
            row["empty"] = scan.empty;
            row["values_seen"] = scan.values_seen;
            if (scan.empty) {
                row["min_max_magnitude"] = nullptr;
            } else {
                row["min_max_magnitude"] = emit_rat(scan.min_max_magnitude);
                Json arg = Json::array();
                for (const Rat& c : scan.argmin) arg.push_back(emit_rat(c));
                row["argmin"] = arg;
            }
            rep.rows.push_back(row);
        }
    } catch (const HypothesisError& e) {
        rep.rows.push_back(Json{{"kind", "error"}, {"what", e.what()}});
        rep.status = "hypothesis-fail";
        rep.exit_code = 2;
    } catch (const std::invalid_argument& e) {
        rep.rows.push_back(Json{{"kind", "error"}, {"what", e.what()}});
        rep.status = "input-error";
        rep.exit_code = 4;
    } catch (const std::domain_error& e) {
        rep.rows.push_back(Json{{"kind", "error"}, {"what", e.what()}});
        rep.status = "input-error";
        rep.exit_code = 4;
    } catch (const std::exception& e) {
        rep.rows.push_back(Json{{"kind", "error"}, {"what", e.what()}});
        rep.status = "internal-error";
        rep.exit_code = 5;
    }
    return finish(rep);
}

std::string emit_report(const Report& r, const std::string& format) {
    if (format == "csv") return emit_report_csv(r);
    if (format == "json") return emit_report_jsonl(r);
    throw std::invalid_argument("format must be json or csv");
}

}  // namespace oppairs
