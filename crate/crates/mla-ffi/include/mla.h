#ifndef MLA_H
#define MLA_H

/* Generated by cbindgen from the mla-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every API call.
 */
typedef enum MlaStatus {
  MLA_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MLA_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MLA_STATUS_INVALID_UTF8 = 2,
  /**
   * A document failed to parse or validate.
   */
  MLA_STATUS_PARSE_ERROR = 3,
  /**
   * Inputs violate a precondition (invalid graph, uncovered edge, ...).
   */
  MLA_STATUS_INVALID_INPUT = 4,
  /**
   * The instance exceeds a documented size cap.
   */
  MLA_STATUS_CAP_EXCEEDED = 5,
  /**
   * A check failed (verification or lemma checks).
   */
  MLA_STATUS_CHECK_FAILED = 6,
  /**
   * Unexpected internal failure.
   */
  MLA_STATUS_INTERNAL = 7,
} MlaStatus;

/**
 * Opaque block map handle.
 */
typedef struct MlaBlockMap MlaBlockMap;

/**
 * Opaque vertex cover handle.
 */
typedef struct MlaCover MlaCover;

/**
 * Opaque cubic graph handle.
 */
typedef struct MlaGraph MlaGraph;

/**
 * Opaque aligned-pair instance handle.
 */
typedef struct MlaInstance MlaInstance;

/**
 * Opaque labeling handle.
 */
typedef struct MlaLabeling MlaLabeling;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failing call on this thread, or null.
 * Valid until the next API call on the same thread.
 */
const char *mla_last_error(void);

/**
 * Releases a string returned through a `char **` out-parameter.
 *
 * # Safety
 * `string` must have been returned by this library and not freed yet.
 */
void mla_string_free(char *string);

/**
 * Creates the complete graph on four vertices.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MlaStatus mla_graph_k4(struct MlaGraph **out);

/**
 * Samples a random simple cubic graph on `n` vertices (n even, >= 4).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MlaStatus mla_graph_random_cubic(uint32_t n, uint64_t seed, struct MlaGraph **out);

/**
 * Parses and validates a graph document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid.
 */
enum MlaStatus mla_graph_from_json(const char *json, struct MlaGraph **out);

/**
 * Serializes a graph.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be valid.
 */
enum MlaStatus mla_graph_to_json(const struct MlaGraph *graph, char **out);

/**
 * Vertex count of a graph (0 for a null handle).
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
uint32_t mla_graph_vertex_count(const struct MlaGraph *graph);

/**
 * # Safety
 * `graph` must have been created by this library and not freed yet.
 */
void mla_graph_free(struct MlaGraph *graph);

/**
 * Builds the aligned-pair instance and block map encoding `graph`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlaStatus mla_reduce(const struct MlaGraph *graph,
                          struct MlaInstance **out_instance,
                          struct MlaBlockMap **out_blockmap);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid.
 */
enum MlaStatus mla_instance_from_json(const char *json, struct MlaInstance **out);

/**
 * # Safety
 * `instance` must be a live handle; `out` must be valid.
 */
enum MlaStatus mla_instance_to_json(const struct MlaInstance *instance, char **out);

/**
 * Number of alignment columns (0 for a null handle).
 *
 * # Safety
 * `instance` must be a live handle or null.
 */
size_t mla_instance_columns(const struct MlaInstance *instance);

/**
 * Largest per-genome occurrence count over all symbols.
 *
 * # Safety
 * `instance` must be a live handle; `out` must be valid.
 */
enum MlaStatus mla_instance_max_occurrence(const struct MlaInstance *instance, size_t *out);

/**
 * # Safety
 * `instance` must have been created by this library and not freed yet.
 */
void mla_instance_free(struct MlaInstance *instance);

/**
 * # Safety
 * `blockmap` must be a live handle; `out` must be valid.
 */
enum MlaStatus mla_blockmap_to_json(const struct MlaBlockMap *blockmap, char **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid.
 */
enum MlaStatus mla_blockmap_from_json(const char *json, struct MlaBlockMap **out);

/**
 * # Safety
 * `blockmap` must have been created by this library and not freed yet.
 */
void mla_blockmap_free(struct MlaBlockMap *blockmap);

/**
 * Minimum vertex cover (lexicographically smallest optimum).
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlaStatus mla_vc_exact(const struct MlaGraph *graph, struct MlaCover **out);

/**
 * Matching-based 2-approximate vertex cover.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlaStatus mla_vc_approx_matching(const struct MlaGraph *graph, struct MlaCover **out);

/**
 * Number of vertices in a cover (0 for a null handle).
 *
 * # Safety
 * `cover` must be a live handle or null.
 */
size_t mla_cover_size(const struct MlaCover *cover);

/**
 * # Safety
 * `cover` must be a live handle; `out` must be valid.
 */
enum MlaStatus mla_cover_to_json(const struct MlaCover *cover, char **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid.
 */
enum MlaStatus mla_cover_from_json(const char *json, struct MlaCover **out);

/**
 * # Safety
 * `cover` must have been created by this library and not freed yet.
 */
void mla_cover_free(struct MlaCover *cover);

/**
 * Builds the canonical labeling encoding `cover` on `graph`'s instance.
 *
 * # Safety
 * All pointers must be valid live handles.
 */
enum MlaStatus mla_cover_to_labeling(const struct MlaGraph *graph,
                                     const struct MlaCover *cover,
                                     const struct MlaInstance *instance,
                                     const struct MlaBlockMap *blockmap,
                                     struct MlaLabeling **out);

/**
 * Normalizes `labeling` and reads off the vertex cover it encodes.
 *
 * # Safety
 * All pointers must be valid live handles.
 */
enum MlaStatus mla_labeling_to_cover(const struct MlaGraph *graph,
                                     const struct MlaInstance *instance,
                                     const struct MlaBlockMap *blockmap,
                                     const struct MlaLabeling *labeling,
                                     struct MlaCover **out);

/**
 * Branch-and-bound exact solve within `node_budget` search nodes.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlaStatus mla_solve_exact(const struct MlaInstance *instance,
                               uint64_t node_budget,
                               struct MlaLabeling **out_labeling,
                               uint64_t *out_cost,
                               bool *out_proven);

/**
 * Exhaustive reference solve (small instances only).
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlaStatus mla_solve_oracle(const struct MlaInstance *instance,
                                struct MlaLabeling **out_labeling,
                                uint64_t *out_cost,
                                bool *out_proven);

/**
 * Total labeling cost.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlaStatus mla_labeling_cost(const struct MlaLabeling *labeling, uint64_t *out);

/**
 * Checks coverage and feasibility of a labeling against an instance.
 * Returns `CheckFailed` (with both flags filled in) when either fails.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlaStatus mla_labeling_verify(const struct MlaInstance *instance,
                                   const struct MlaLabeling *labeling,
                                   bool *out_cover_valid,
                                   bool *out_feasible);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid.
 */
enum MlaStatus mla_labeling_from_json(const char *json, struct MlaLabeling **out);

/**
 * # Safety
 * `labeling` must be a live handle; `out` must be valid.
 */
enum MlaStatus mla_labeling_to_json(const struct MlaLabeling *labeling, char **out);

/**
 * # Safety
 * `labeling` must have been created by this library and not freed yet.
 */
void mla_labeling_free(struct MlaLabeling *labeling);

/**
 * Runs the lemma-check battery on `graph`. `out_report_json` receives
 * the full report; the status is `CheckFailed` when any check fails.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlaStatus mla_check_lemmas(const struct MlaGraph *graph,
                                bool *out_all_passed,
                                char **out_report_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MLA_H */
