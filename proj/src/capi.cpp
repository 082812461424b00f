#include "oppairs.h"

#include "runner.hpp"

#include <cstring>
#include <new>
#include <string>

struct oppairs_instance {
    oppairs::PairInstance v;
};

struct oppairs_report {
    oppairs::Report v;
};

namespace {

void put_err(char* errbuf, size_t errbuf_len, const char* msg) {
    if (!errbuf || errbuf_len == 0) return;
    std::strncpy(errbuf, msg, errbuf_len - 1);
    errbuf[errbuf_len - 1] = '\0';
}

char* dup_text(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class Fn>
int guarded(char* errbuf, size_t errbuf_len, Fn&& fn) {
    try {
        return fn();
    } catch (const oppairs::HypothesisError& e) {
        put_err(errbuf, errbuf_len, e.what());
        return OPPAIRS_E_HYPOTHESIS;
    } catch (const std::invalid_argument& e) {
        put_err(errbuf, errbuf_len, e.what());
        return OPPAIRS_E_INPUT;
    } catch (const std::domain_error& e) {
        put_err(errbuf, errbuf_len, e.what());
        return OPPAIRS_E_INPUT;
    } catch (const std::exception& e) {
        put_err(errbuf, errbuf_len, e.what());
        return OPPAIRS_E_INTERNAL;
    }
}

}  // namespace

extern "C" {

const char* oppairs_version(void) { return oppairs::kToolVersion; }

int oppairs_instance_parse(const char* text, oppairs_instance** out, char* errbuf, size_t errbuf_len) {
    if (!text || !out) {
        put_err(errbuf, errbuf_len, "null argument");
        return OPPAIRS_E_INPUT;
    }
    *out = nullptr;
    return guarded(errbuf, errbuf_len, [&] {
        auto* handle = new oppairs_instance{oppairs::parse_instance(text)};
        *out = handle;
        return OPPAIRS_OK;
    });
}

void oppairs_instance_free(oppairs_instance* inst) { delete inst; }

int oppairs_instance_emit(const oppairs_instance* inst, char** out, char* errbuf, size_t errbuf_len) {
    if (!inst || !out) {
        put_err(errbuf, errbuf_len, "null argument");
        return OPPAIRS_E_INPUT;
    }
    *out = nullptr;
    return guarded(errbuf, errbuf_len, [&] {
        *out = dup_text(oppairs::emit_instance(inst->v));
        return *out ? OPPAIRS_OK : OPPAIRS_E_INTERNAL;
    });
}

int oppairs_instance_digest(const oppairs_instance* inst, char** out, char* errbuf, size_t errbuf_len) {
    if (!inst || !out) {
        put_err(errbuf, errbuf_len, "null argument");
        return OPPAIRS_E_INPUT;
    }
    *out = nullptr;
    return guarded(errbuf, errbuf_len, [&] {
        *out = dup_text(oppairs::instance_digest(inst->v));
        return *out ? OPPAIRS_OK : OPPAIRS_E_INTERNAL;
    });
}

int oppairs_run(const oppairs_instance* inst, const char* config_json, oppairs_report** report, char* errbuf,
                size_t errbuf_len) {
    if (!inst || !config_json || !report) {
        put_err(errbuf, errbuf_len, "null argument");
        return OPPAIRS_E_INPUT;
    }
    *report = nullptr;
    return guarded(errbuf, errbuf_len, [&] {
        oppairs::RunConfig cfg = oppairs::parse_run_config(config_json);
        auto* handle = new oppairs_report{oppairs::run_instance(inst->v, cfg)};
        *report = handle;
        if (handle->v.exit_code != 0 && !handle->v.rows.empty()) {
            const oppairs::Json& last = handle->v.rows.back();
            if (last.contains("what")) put_err(errbuf, errbuf_len, last["what"].get<std::string>().c_str());
        }
        return handle->v.exit_code;
    });
}

int oppairs_report_exit_code(const oppairs_report* rep) { return rep ? rep->v.exit_code : OPPAIRS_E_INPUT; }

int oppairs_report_emit(const oppairs_report* rep, const char* format, char** out, char* errbuf,
                        size_t errbuf_len) {
    if (!rep || !format || !out) {
        put_err(errbuf, errbuf_len, "null argument");
        return OPPAIRS_E_INPUT;
    }
    *out = nullptr;
    return guarded(errbuf, errbuf_len, [&] {
        *out = dup_text(oppairs::emit_report(rep->v, format));
        return *out ? OPPAIRS_OK : OPPAIRS_E_INTERNAL;
    });
}

void oppairs_report_free(oppairs_report* rep) { delete rep; }

void oppairs_text_free(char* text) { delete[] text; }

}  // extern "C"
