#include "io/report.hpp"

#include <sstream>
#include <stdexcept>

namespace oppairs {

std::string emit_report_jsonl(const Report& r) {
    std::ostringstream os;
    Json header = Json::object();
    header["record"] = "header";
    header["version"] = r.version;
    header["instance_digest"] = r.instance_digest;
    header["mode"] = r.mode;
    os << header.dump() << "\n";
    for (const Json& row : r.rows) {
        Json line = Json::object();
        line["record"] = "row";
        for (const auto& [k, v] : row.items()) line[k] = v;
        os << line.dump() << "\n";
    }
    Json status = Json::object();
    status["record"] = "status";
    status["status"] = r.status;
    status["exit_code"] = r.exit_code;
    status["elapsed_ms"] = r.elapsed_ms;
    os << status.dump() << "\n";
    return os.str();
}

namespace {

std::string join_finite(const Json& obj, const std::string& inner) {
    std::string out;
    bool first = true;
    for (const auto& [key, value] : obj.items()) {
        if (!first) out += ";";
        first = false;
        const Json& v = inner.empty() ? value : value.at(inner);
        out += v.is_string() ? v.get<std::string>() : v.dump();
    }
    return out;
}

}  // namespace

std::string emit_report_csv(const Report& r) {
    std::ostringstream os;
    os << "eps_archimedean,eps_p,found,steps,magnitude_Q_arch,magnitude_L_arch,magnitude_Q_p,magnitude_L_p\n";
    for (const Json& row : r.rows) {
        if (!row.contains("eps_arch")) continue;
        bool found = row.value("found", false);
        os << row.at("eps_arch").get<std::string>() << ",";
        os << join_finite(row.at("eps_p"), "") << ",";
        os << (found ? "true" : "false") << ",";
        os << row.at("steps").get<long long>() << ",";
        if (found) {
            const Json& mags = row.at("magnitudes");
            Json finite = Json::object();
            for (const auto& [key, value] : mags.items())
                if (key != "arch") finite[key] = value;
            os << mags.at("arch").at("q").get<std::string>() << ",";
            os << mags.at("arch").at("l").get<std::string>() << ",";
            os << join_finite(finite, "q") << ",";
            os << join_finite(finite, "l");
        } else {
            os << ",,,";
        }
        os << "\n";
    }
    return os.str();
}

Report parse_report_jsonl(const std::string& text) {
    Report r;
    std::istringstream is(text);
    std::string line;
    bool have_header = false, have_status = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Json obj;
        try {
            obj = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw std::invalid_argument(std::string("report line: ") + e.what());
        }
        std::string kind = obj.value("record", "");
        if (kind == "header") {
            if (have_header) throw std::invalid_argument("report: duplicate header line");
            have_header = true;
            r.version = obj.at("version").get<std::string>();
            r.instance_digest = obj.at("instance_digest").get<std::string>();
            r.mode = obj.at("mode").get<std::string>();
        } else if (kind == "row") {
            if (!have_header || have_status) throw std::invalid_argument("report: row outside header..status");
            obj.erase("record");
            r.rows.push_back(std::move(obj));
        } else if (kind == "status") {
            if (!have_header || have_status) throw std::invalid_argument("report: misplaced status line");
            have_status = true;
            r.status = obj.at("status").get<std::string>();
            r.exit_code = obj.at("exit_code").get<int>();
            r.elapsed_ms = obj.at("elapsed_ms").get<long long>();
        } else {
            throw std::invalid_argument("report: unknown record kind");
        }
    }
    if (!have_header || !have_status) throw std::invalid_argument("report: incomplete document");
    return r;
}

}  // namespace oppairs
