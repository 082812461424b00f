#include "oppairs.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

struct CommonOpts {
    std::string instance_path;
    std::vector<std::string> eps_arch;
    std::vector<std::string> eps_p;
    long long budget = 1000000;
    long long max_classes = 64;
    long long wall_ms = 0;
    long long seed = 1;
    long long height = 20;
    bool override_hypotheses = false;
    std::string format = "json";
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_eps, bool with_height) {
    cmd->add_option("--instance", o.instance_path, "instance document path")->required();
    if (with_eps) {
        cmd->add_option("--eps-arch", o.eps_arch,
                        "archimedean bound(s), rational, comma lists allowed (repeatable)");
        cmd->add_option("--eps-p", o.eps_p, "finite-place bound(s) as P=RAT[,RAT...] (repeatable)");
        cmd->add_option("--budget", o.budget, "max enumeration steps");
        cmd->add_option("--max-classes", o.max_classes, "max congruence classes");
        cmd->add_option("--wall-ms", o.wall_ms, "wall-clock cap in milliseconds (0 = none)");
        cmd->add_option("--seed", o.seed, "rng seed (reserved; engine is deterministic)");
        cmd->add_flag("--override-hypotheses", o.override_hypotheses,
                      "search even when the hypothesis check fails");
    }
    if (with_height) cmd->add_option("--height", o.height, "enumeration height bound");
    cmd->add_option("--format", o.format, "report format: json (json-lines) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out_path, "write the report here instead of stdout");
}

std::vector<std::string> split_commas(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const std::string& item : raw) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

int fail_input(const std::string& msg) {
    std::cerr << "oppairs: " << msg << "\n";
    return OPPAIRS_E_INPUT;
}

int run_mode(const std::string& mode, const CommonOpts& o) {
    std::ifstream in(o.instance_path, std::ios::binary);
    if (!in) return fail_input("cannot open instance file: " + o.instance_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    char err[1024] = {0};
    oppairs_instance* inst = nullptr;
    if (oppairs_instance_parse(text.c_str(), &inst, err, sizeof err) != OPPAIRS_OK)
        return fail_input(err);

    Json cfg = Json::object();
    cfg["mode"] = mode;
    std::vector<std::string> arch = split_commas(o.eps_arch);
    if (!arch.empty()) cfg["eps_arch"] = arch;
    Json epsp = Json::object();
    for (const std::string& token : o.eps_p) {
        // P=RAT[,RAT...]; comma pieces without their own P= inherit the current prime
        std::string key;
        for (const std::string& spec : split_commas({token})) {
            size_t eq = spec.find('=');
            std::string val = spec;
            if (eq != std::string::npos) {
                if (eq == 0 || eq + 1 == spec.size()) {
                    oppairs_instance_free(inst);
                    return fail_input("--eps-p expects P=RAT, got: " + spec);
                }
                key = spec.substr(0, eq);
                val = spec.substr(eq + 1);
            } else if (key.empty()) {
                oppairs_instance_free(inst);
                return fail_input("--eps-p expects P=RAT, got: " + spec);
            }
            if (!epsp.contains(key)) epsp[key] = Json::array();
            epsp[key].push_back(val);
        }
    }
    if (!epsp.empty()) cfg["eps_p"] = epsp;
    cfg["budget"] = Json{{"max_steps", o.budget},
                         {"max_classes", o.max_classes},
                         {"wall_ms", o.wall_ms},
                         {"seed", o.seed}};
    if (o.override_hypotheses) cfg["override_hypotheses"] = true;
    cfg["height"] = o.height;
    cfg["format"] = o.format;

    oppairs_report* rep = nullptr;
    int code = oppairs_run(inst, cfg.dump().c_str(), &rep, err, sizeof err);
    oppairs_instance_free(inst);
    if (!rep) {
        std::cerr << "oppairs: " << err << "\n";
        return code;
    }
    if (err[0]) std::cerr << "oppairs: " << err << "\n";

    char* emitted = nullptr;
    int ecode = oppairs_report_emit(rep, o.format.c_str(), &emitted, err, sizeof err);
    if (ecode != OPPAIRS_OK || !emitted) {
        oppairs_report_free(rep);
        std::cerr << "oppairs: " << err << "\n";
        return ecode == OPPAIRS_OK ? OPPAIRS_E_INTERNAL : ecode;
    }
    if (o.out_path.empty()) {
        std::cout << emitted;
    } else {
        std::ofstream outf(o.out_path, std::ios::binary);
        if (!outf) {
            oppairs_text_free(emitted);
            oppairs_report_free(rep);
            return fail_input("cannot write: " + o.out_path);
        }
        outf << emitted;
    }
    oppairs_text_free(emitted);
    oppairs_report_free(rep);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("oppairs ") + oppairs_version() +
                 " — exact S-arithmetic workbench for quadratic/linear pairs"};
    app.require_subcommand(1);

    CommonOpts o;
    struct ModeSpec {
        const char* name;
        const char* help;
        bool eps, height;
    };
    const ModeSpec specs[] = {
        {"check", "verify the three hypotheses exactly", false, false},
        {"search", "find one witness for the given bounds", true, false},
        {"experiment", "run a shrinking-epsilon schedule (lists are crossed)", true, false},
        {"reduce", "find a hyperplane reducing dimension n to n-1", true, false},
        {"obstruct", "scan a rational-pencil instance for the product-formula floor", false, true},
    };
    for (const ModeSpec& m : specs) add_common(app.add_subcommand(m.name, m.help), o, m.eps, m.height);

    CLI11_PARSE(app, argc, argv);
    for (const ModeSpec& m : specs)
        if (app.got_subcommand(m.name)) return run_mode(m.name, o);
    return OPPAIRS_E_INPUT;
}
