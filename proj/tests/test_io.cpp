#include "doctest.h"

#include "helpers.hpp"
#include "io/instance_io.hpp"
#include "io/report.hpp"
#include "oppairs.h"
#include "runner.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

using namespace oppairs;

namespace {

std::string what_of(void (*fn)(const std::string&), const std::string& text) {
    try {
        fn(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

void parse_void(const std::string& text) { parse_instance(text); }

// minimal valid document the rejection tests mutate
std::string base_doc(const std::string& n, const std::string& d, const std::string& places,
                     const std::string& forms_extra = "") {
    return std::string("{\"n\": ") + n + ", \"d\": " + d + ", \"places\": " + places +
           ", \"forms\": {" +
           "\"arch\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]}, " +
           "\"5\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]}" + forms_extra + "}}";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("bundled instance parses to the frozen digest") {
    std::string text = read_fixture("i1.json");
    PairInstance i1 = parse_instance(text);
    CHECK(i1.label == "i1");
    CHECK(i1.n == 4);
    CHECK(i1.d == 2);
    REQUIRE(i1.finite.size() == 1);
    CHECK(i1.finite[0].p == 5);
    CHECK(i1.q_arch.c[0][1] == ExtReal(1));
    CHECK(i1.q_arch.c[2][2] == ExtReal(Rat(0), Rat(1), 2));
    CHECK(i1.q_arch.c[3][3] == ExtReal(-1));
    CHECK(i1.l_arch.c[3] == ExtReal(1));
    CHECK(i1.finite[0].q.c[2][2] == Rat(1));
    CHECK(instance_digest(i1) == "f0e27f0bd6f1478e");

    std::string canon = emit_instance(i1);
    PairInstance again = parse_instance(canon);
    CHECK(emit_instance(again) == canon);
    CHECK(instance_digest(again) == instance_digest(i1));
}

TEST_CASE("places are sorted on parse and emission") {
    std::string text =
        "{\"n\": 2, \"d\": 2, \"places\": [7, 5], \"forms\": {"
        "\"arch\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]},"
        "\"5\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]},"
        "\"7\": {\"q\": [[\"0\",\"2\"],[\"0\"]], \"l\": [\"1\",\"0\"]}}}";
    PairInstance inst = parse_instance(text);
    REQUIRE(inst.finite.size() == 2);
    CHECK(inst.finite[0].p == 5);
    CHECK(inst.finite[1].p == 7);
    CHECK(inst.finite[1].q.c[0][1] == Rat(2));
    std::string canon = emit_instance(inst);
    CHECK(canon.find("\"5\"") < canon.find("\"7\""));
}

TEST_CASE("semantic errors accumulate with their JSON paths") {
    std::string text =
        "{\"n\": 2, \"d\": 2, \"places\": [5], \"forms\": {"
        "\"arch\": {\"q\": [[\"x\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1/0\"]},"
        "\"5\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]}}}";
    std::string msg = what_of(parse_void, text);
    CHECK(msg.find("/forms/arch/q/0/0") != std::string::npos);
    CHECK(msg.find("/forms/arch/l/1") != std::string::npos);
    CHECK(msg.find("; ") != std::string::npos);
}

TEST_CASE("schema violations are rejected") {
    CHECK_THROWS_AS(parse_instance("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_instance("[1, 2]"), std::invalid_argument);

    CHECK(what_of(parse_void, base_doc("0", "2", "[5]")).find("/n") != std::string::npos);
    CHECK(what_of(parse_void, base_doc("2", "4", "[5]")).find("non-square") != std::string::npos);
    CHECK(what_of(parse_void, base_doc("2", "2", "[5, 5]")).find("duplicate place") !=
          std::string::npos);
    CHECK(what_of(parse_void, base_doc("2", "2", "[6]")).find("not prime") != std::string::npos);

    // wrong row length in the arch block
    std::string short_row =
        "{\"n\": 2, \"d\": 2, \"places\": [5], \"forms\": {"
        "\"arch\": {\"q\": [[\"0\"],[\"0\"]], \"l\": [\"0\",\"1\"]},"
        "\"5\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]}}}";
    CHECK(what_of(parse_void, short_row).find("/forms/arch/q/0") != std::string::npos);

    // sqrt(3) entries under d = 2
    std::string mixed =
        "{\"n\": 2, \"d\": 2, \"places\": [5], \"forms\": {"
        "\"arch\": {\"q\": [[\"0\",\"sqrt(3)\"],[\"0\"]], \"l\": [\"0\",\"1\"]},"
        "\"5\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]}}}";
    CHECK(what_of(parse_void, mixed).find("/forms/arch/q/0/1") != std::string::npos);

    CHECK(what_of(parse_void, "{\"n\": 2, \"d\": 2, \"places\": [5], \"bogus\": 1, \"forms\": {}}")
              .find("/bogus") != std::string::npos);

    // forms for a place not listed, and a listed place without forms
    std::string stray = base_doc("2", "2", "[5]",
                                 ", \"7\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]}");
    CHECK(what_of(parse_void, stray).find("/forms/7") != std::string::npos);
    std::string missing =
        "{\"n\": 2, \"d\": 2, \"places\": [5], \"forms\": {"
        "\"arch\": {\"q\": [[\"0\",\"1\"],[\"0\"]], \"l\": [\"0\",\"1\"]}}}";
    CHECK(what_of(parse_void, missing).find("/forms/5") != std::string::npos);
}

TEST_CASE("integer JSON entries mean the same as their string forms") {
    std::string ints = base_doc("2", "2", "[5]");
    std::string with_ints = ints;
    size_t pos;
    while ((pos = with_ints.find("\"1\"")) != std::string::npos) with_ints.replace(pos, 3, "1");
    while ((pos = with_ints.find("\"0\"")) != std::string::npos) with_ints.replace(pos, 3, "0");
    CHECK(emit_instance(parse_instance(with_ints)) == emit_instance(parse_instance(ints)));
}

TEST_CASE("json lines reports round trip") {
    Report r;
    r.instance_digest = "0123456789abcdef";
    r.mode = "experiment";
    r.rows.push_back(Json{{"kind", "note"}, {"text", "alpha"}});
    r.rows.push_back(Json{{"kind", "note"}, {"text", "beta"}, {"k", 7}});
    r.status = "ok";
    r.exit_code = 0;
    r.elapsed_ms = 41;
    std::string text = emit_report_jsonl(r);
    Report back = parse_report_jsonl(text);
    CHECK(back == r);

    std::string header =
        "{\"record\":\"header\",\"version\":\"0.1.0\",\"instance_digest\":\"x\",\"mode\":\"check\"}\n";
    std::string status = "{\"record\":\"status\",\"status\":\"ok\",\"exit_code\":0,\"elapsed_ms\":1}\n";
    std::string row = "{\"record\":\"row\",\"kind\":\"note\"}\n";
    CHECK_THROWS_AS(parse_report_jsonl(header + header + status), std::invalid_argument);
    CHECK_THROWS_AS(parse_report_jsonl(header + status + row), std::invalid_argument);
    CHECK_THROWS_AS(parse_report_jsonl(row + header + status), std::invalid_argument);
    CHECK_THROWS_AS(parse_report_jsonl(header + row), std::invalid_argument);
    CHECK_THROWS_AS(parse_report_jsonl(header + "{\"record\":\"bogus\"}\n" + status),
                    std::invalid_argument);
}

TEST_CASE("csv emission is pinned column for column") {
    Report r;
    r.mode = "experiment";
    r.rows.push_back(Json{{"kind", "note"}, {"text", "skipped: no eps columns"}});
    r.rows.push_back(Json{
        {"eps_arch", "1/2"},
        {"eps_p", Json{{"5", "1/25"}}},
        {"found", true},
        {"steps", 12},
        {"magnitudes", Json{{"arch", Json{{"q", "0"}, {"l", "0"}}}, {"5", Json{{"q", "0"}, {"l", "0"}}}}},
    });
    r.rows.push_back(Json{
        {"eps_arch", "1"},
        {"eps_p", Json{{"5", "1/5"}, {"7", "1/7"}}},
        {"found", true},
        {"steps", 40},
        {"magnitudes", Json{{"arch", Json{{"q", "3/2"}, {"l", "1/2"}}},
                            {"5", Json{{"q", "1/25"}, {"l", "1/5"}}},
                            {"7", Json{{"q", "1/49"}, {"l", "1/7"}}}}},
    });
    r.rows.push_back(Json{{"eps_arch", "1/100"},
                          {"eps_p", Json{{"5", "1/25"}}},
                          {"found", false},
                          {"steps", 999}});
    std::string want =
        "eps_archimedean,eps_p,found,steps,magnitude_Q_arch,magnitude_L_arch,magnitude_Q_p,"
        "magnitude_L_p\n"
        "1/2,1/25,true,12,0,0,0,0\n"
        "1,1/5;1/7,true,40,3/2,1/2,1/25;1/49,1/5;1/7\n"
        "1/100,1/25,false,999,,,,\n";
    CHECK(emit_report_csv(r) == want);

    Report empty;
    empty.mode = "check";
    CHECK(emit_report_csv(empty) ==
          "eps_archimedean,eps_p,found,steps,magnitude_Q_arch,magnitude_L_arch,magnitude_Q_p,"
          "magnitude_L_p\n");
}

TEST_CASE("run configs parse with defaults and strict validation") {
    RunConfig min = parse_run_config("{\"mode\": \"check\"}");
    CHECK(min.mode == "check");
    CHECK(min.eps_arch.empty());
    CHECK(min.eps_p.empty());
    CHECK(min.budget.max_steps == 1000000);
    CHECK(min.budget.max_classes == 64);
    CHECK(min.budget.wall_ms == 0);
    CHECK(min.budget.seed == 1);
    CHECK(!min.override_hypotheses);
    CHECK(min.height == 20);
    CHECK(min.format == "json");

    RunConfig full = parse_run_config(
        "{\"mode\": \"experiment\", \"eps_arch\": [\"1\", \"1/2\"],"
        " \"eps_p\": {\"5\": [\"1/5\", \"1/25\"]},"
        " \"budget\": {\"max_steps\": 10, \"max_classes\": 2, \"wall_ms\": 100, \"seed\": 9},"
        " \"override_hypotheses\": true, \"height\": 3, \"format\": \"csv\"}");
    CHECK(full.eps_arch == std::vector<Rat>{Rat(1), Rat(1, 2)});
    REQUIRE(full.eps_p.count(5) == 1);
    CHECK(full.eps_p.at(5) == std::vector<Rat>{Rat(1, 5), Rat(1, 25)});
    CHECK(full.budget.max_steps == 10);
    CHECK(full.budget.seed == 9);
    CHECK(full.override_hypotheses);
    CHECK(full.height == 3);
    CHECK(full.format == "csv");

    CHECK_THROWS_AS(parse_run_config("{}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"mode\": \"fly\"}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("nope"), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"mode\": \"check\", \"eps_arch\": [1]}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"mode\": \"check\", \"eps_arch\": []}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"mode\": \"check\", \"eps_arch\": [\"0\"]}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"mode\": \"check\", \"eps_p\": {\"5x\": [\"1\"]}}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_run_config("{\"mode\": \"check\", \"budget\": {\"max_steps\": -1}}"),
        std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"mode\": \"check\", \"height\": -1}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("{\"mode\": \"check\", \"format\": \"xml\"}"),
                    std::invalid_argument);
}

TEST_CASE("C interface round trip") {
    CHECK(std::string(oppairs_version()) == std::string(kToolVersion));

    std::string text = read_fixture("i1.json");
    char errbuf[512] = {0};
    oppairs_instance* inst = nullptr;
    REQUIRE(oppairs_instance_parse(text.c_str(), &inst, errbuf, sizeof errbuf) == OPPAIRS_OK);
    REQUIRE(inst != nullptr);

    char* digest = nullptr;
    REQUIRE(oppairs_instance_digest(inst, &digest, errbuf, sizeof errbuf) == OPPAIRS_OK);
    CHECK(std::string(digest) == "f0e27f0bd6f1478e");
    oppairs_text_free(digest);

    char* emitted = nullptr;
    REQUIRE(oppairs_instance_emit(inst, &emitted, errbuf, sizeof errbuf) == OPPAIRS_OK);
    oppairs_instance* inst2 = nullptr;
    REQUIRE(oppairs_instance_parse(emitted, &inst2, errbuf, sizeof errbuf) == OPPAIRS_OK);
    char* digest2 = nullptr;
    REQUIRE(oppairs_instance_digest(inst2, &digest2, errbuf, sizeof errbuf) == OPPAIRS_OK);
    CHECK(std::string(digest2) == "f0e27f0bd6f1478e");
    oppairs_text_free(digest2);
    oppairs_instance_free(inst2);
    oppairs_text_free(emitted);

    oppairs_report* rep = nullptr;
    int rc = oppairs_run(inst, "{\"mode\": \"check\"}", &rep, errbuf, sizeof errbuf);
    CHECK(rc == OPPAIRS_OK);
    REQUIRE(rep != nullptr);
    CHECK(oppairs_report_exit_code(rep) == 0);
    char* jsonl = nullptr;
    REQUIRE(oppairs_report_emit(rep, "json", &jsonl, errbuf, sizeof errbuf) == OPPAIRS_OK);
    Report parsed = parse_report_jsonl(jsonl);
    CHECK(parsed.mode == "check");
    CHECK(parsed.status == "ok");
    CHECK(parsed.instance_digest == "f0e27f0bd6f1478e");
    oppairs_text_free(jsonl);
    char* csv = nullptr;
    REQUIRE(oppairs_report_emit(rep, "csv", &csv, errbuf, sizeof errbuf) == OPPAIRS_OK);
    CHECK(std::string(csv).rfind("eps_archimedean,", 0) == 0);
    oppairs_text_free(csv);
    CHECK(oppairs_report_emit(rep, "yaml", &csv, errbuf, sizeof errbuf) == OPPAIRS_E_INPUT);
    oppairs_report_free(rep);

    // config errors return E_INPUT and leave the report handle null
    oppairs_report* none = nullptr;
    CHECK(oppairs_run(inst, "{\"mode\": \"warp\"}", &none, errbuf, sizeof errbuf) == OPPAIRS_E_INPUT);
    CHECK(none == nullptr);
    CHECK(errbuf[0] != '\0');
    oppairs_instance_free(inst);

    oppairs_instance* bad = nullptr;
    errbuf[0] = '\0';
    CHECK(oppairs_instance_parse("malformed", &bad, errbuf, sizeof errbuf) == OPPAIRS_E_INPUT);
    CHECK(bad == nullptr);
    CHECK(errbuf[0] != '\0');
}

TEST_CASE("hypothesis failure surfaces as exit code 2 through the C interface") {
    std::string text = read_fixture("rational_control.json");
    char errbuf[512] = {0};
    oppairs_instance* inst = nullptr;
    REQUIRE(oppairs_instance_parse(text.c_str(), &inst, errbuf, sizeof errbuf) == OPPAIRS_OK);
    oppairs_report* rep = nullptr;
    int rc = oppairs_run(inst, "{\"mode\": \"check\"}", &rep, errbuf, sizeof errbuf);
    CHECK(rc == OPPAIRS_E_HYPOTHESIS);
    REQUIRE(rep != nullptr);
    CHECK(oppairs_report_exit_code(rep) == 2);
    oppairs_report_free(rep);
    oppairs_instance_free(inst);
}

}  // TEST_SUITE
