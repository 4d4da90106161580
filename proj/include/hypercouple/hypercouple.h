#ifndef HYPERCOUPLE_H
#define HYPERCOUPLE_H

/* C interface to the hypercouple library.
 *
 * Handles are opaque; every call returns an hc_status and leaves a message
 * for the calling thread in hc_last_error() when it fails. Strings returned
 * through char** are owned by the caller and released with hc_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HC_API __declspec(dllexport)
#elif defined(HYPERCOUPLE_BUILDING_LIBRARY)
#define HC_API __attribute__((visibility("default")))
#else
#define HC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hc_status {
  HC_OK = 0,
  HC_ERR_DOMAIN = 1,
  HC_ERR_INADMISSIBLE = 2,
  HC_ERR_TOO_LARGE = 3,
  HC_ERR_REJECTION_BUDGET = 4,
  HC_ERR_ILLEGAL_SWITCH = 5,
  HC_ERR_INVALID_CONFIG = 6,
  HC_ERR_IO = 7,
  HC_ERR_INTERNAL = 8,
  HC_ERR_ARGUMENT = 9 /* null handle or pointer */
} hc_status;

typedef enum hc_ham_verdict {
  HC_HAM_FOUND = 0,
  HC_HAM_NONE = 1,
  HC_HAM_UNKNOWN = 2
} hc_ham_verdict;

typedef struct hc_graph hc_graph;
typedef struct hc_experiment hc_experiment;

HC_API const char* hc_version(void);
HC_API const char* hc_status_name(hc_status status);
/* Message of the last failed call on this thread; "" if none. */
HC_API const char* hc_last_error(void);
HC_API void hc_string_free(char* s);

/* Ordered k-graphs on vertices 1..n. */
HC_API hc_status hc_graph_create(int n, int k, hc_graph** out);
HC_API hc_status hc_graph_load(const char* path, hc_graph** out);
HC_API void hc_graph_free(hc_graph* g);
HC_API hc_status hc_graph_add_edge(hc_graph* g, const int* vertices, int count);
HC_API hc_status hc_graph_info(const hc_graph* g, int* n, int* k, size_t* edges);
HC_API hc_status hc_graph_to_edge_list(const hc_graph* g, char** out);

/* Uniform ordered d-regular k-graph from stream (seed, stream). */
HC_API hc_status hc_sample_regular(int n, int k, int d, uint64_t seed, uint64_t stream, hc_graph** out);

/* Number of ordered d-regular completions of prefix, in decimal. */
HC_API hc_status hc_count_extensions(const hc_graph* prefix, int d, char** count);

/* order may be NULL; otherwise it receives n vertices when a cycle is found,
 * and *offset (if non-NULL) the position of the first window. */
HC_API hc_status hc_find_hamilton_cycle(const hc_graph* g, int ell, uint64_t node_budget,
                                        hc_ham_verdict* verdict, int* order, int* offset);

/* Experiments take a JSON config object (see README). */
HC_API hc_status hc_experiment_create(const char* config_json, hc_experiment** out);
HC_API hc_status hc_experiment_run(hc_experiment* exp);
/* JSON text owned by the handle; empty before a successful run. */
HC_API const char* hc_experiment_summary(const hc_experiment* exp);
HC_API const char* hc_experiment_manifest(const hc_experiment* exp);
HC_API void hc_experiment_free(hc_experiment* exp);

#ifdef __cplusplus
}
#endif

#endif /* HYPERCOUPLE_H */
