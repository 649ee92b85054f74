/* C interface for the cyclepack library.
 *
 * All functions returning int use 0 for success and a negative
 * CpStatus value for failure; cp_last_error_message() describes the
 * most recent failure on the calling thread. Strings returned by the
 * library must be released with cp_string_free().
 */

#ifndef CYCLEPACK_H
#define CYCLEPACK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct CpDigraph CpDigraph;

typedef enum CpStatus {
  CP_OK = 0,
  CP_ERR_NULL_ARGUMENT = -1,
  CP_ERR_INVALID_INPUT = -2,
  CP_ERR_NOT_PACKED = -3,
  CP_ERR_REJECTED = -4,
  CP_ERR_INTERNAL = -5,
} CpStatus;

/* Graph lifecycle. */
CpDigraph *cp_digraph_new(size_t n);
CpDigraph *cp_digraph_parse_edge_list(const char *text);
void cp_digraph_free(CpDigraph *g);
int cp_digraph_add_arc(CpDigraph *g, size_t u, size_t v);
size_t cp_digraph_vertex_count(const CpDigraph *g);
size_t cp_digraph_arc_count(const CpDigraph *g);

/* Packs k cycles with per-vertex congestion at most p over the given
 * vertex set. On success stores a certificate JSON string in *out_json
 * and returns CP_OK; on pipeline failure stores the failure-report
 * JSON and returns CP_ERR_NOT_PACKED. Pass use_paper_constants = 0 to
 * supply scaled constants d, a, b. */
int cp_pack_cycles(const CpDigraph *g, const size_t *set, size_t set_len,
                   size_t k, size_t p, int use_paper_constants, size_t d,
                   size_t a, size_t b, char **out_json);

/* Verifies a certificate JSON string against the graph. Returns CP_OK
 * when it holds, CP_ERR_REJECTED with diagnostics in *out_diagnostics
 * (one line per violated clause) when it does not. */
int cp_verify_certificate(const CpDigraph *g, const char *cert_json,
                          char **out_diagnostics);

/* Exact packing/covering numbers as JSON (desk-scale graphs only;
 * fvs_cap bounds the feedback-set search). */
int cp_gap_report(const CpDigraph *g, size_t fvs_cap, char **out_json);

/* Most recent error message on this thread, or an empty string. The
 * returned pointer is valid until the next library call on the same
 * thread; do not free it. */
const char *cp_last_error_message(void);

void cp_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* CYCLEPACK_H */
