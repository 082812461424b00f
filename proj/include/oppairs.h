#ifndef OPPAIRS_H
#define OPPAIRS_H

/* C interface to the S-arithmetic quadratic/linear pair workbench.
 *
 * All objects are opaque handles created and destroyed here. Functions
 * that can fail take an error buffer; on failure the message is copied
 * in (truncated, always NUL-terminated) and a nonzero code returned.
 * Strings returned through char** are heap-allocated and must be
 * released with oppairs_text_free.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define OPPAIRS_OK 0
#define OPPAIRS_E_HYPOTHESIS 2 /* hypothesis check failed */
#define OPPAIRS_E_BUDGET 3     /* search budget exhausted */
#define OPPAIRS_E_INPUT 4      /* malformed document, config, or arguments */
#define OPPAIRS_E_INTERNAL 5   /* invariant violation inside the engine */

typedef struct oppairs_instance oppairs_instance;
typedef struct oppairs_report oppairs_report;

const char* oppairs_version(void);

/* Parse an instance document (JSON, see the repository README for the
 * schema). On success stores a fresh handle in *out. */
int oppairs_instance_parse(const char* text, oppairs_instance** out, char* errbuf, size_t errbuf_len);
void oppairs_instance_free(oppairs_instance* inst);

/* Canonical re-emission of the parsed instance. */
int oppairs_instance_emit(const oppairs_instance* inst, char** out, char* errbuf, size_t errbuf_len);

/* 16-hex-character digest of the canonical emission. */
int oppairs_instance_digest(const oppairs_instance* inst, char** out, char* errbuf, size_t errbuf_len);

/* Execute one run. config_json selects the mode and parameters:
 *   {"mode": "check|search|experiment|reduce|obstruct",
 *    "eps_arch": ["1/10", ...], "eps_p": {"5": ["1/25", ...]},
 *    "budget": {"max_steps": N, "max_classes": N, "wall_ms": N, "seed": N},
 *    "override_hypotheses": false, "height": 20, "format": "json|csv"}
 * Returns the run's exit code; *report is set whenever the config was
 * readable (including hypothesis failures and exhausted budgets, which
 * are recorded in the report). Config errors return OPPAIRS_E_INPUT
 * with *report left NULL. */
int oppairs_run(const oppairs_instance* inst, const char* config_json, oppairs_report** report, char* errbuf,
                size_t errbuf_len);

int oppairs_report_exit_code(const oppairs_report* rep);

/* format: "json" for json-lines, "csv" for the plot-ready table. */
int oppairs_report_emit(const oppairs_report* rep, const char* format, char** out, char* errbuf,
                        size_t errbuf_len);
void oppairs_report_free(oppairs_report* rep);

void oppairs_text_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* OPPAIRS_H */
