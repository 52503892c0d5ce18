/* Copyright 2026 The EcoDigger Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ECODIGGER_ECODIGGER_H_
#define ECODIGGER_ECODIGGER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ECODIGGER_BUILDING_LIBRARY)
#define ED_API __declspec(dllexport)
#else
#define ED_API __declspec(dllimport)
#endif
#elif defined(ECODIGGER_BUILDING_LIBRARY)
#define ED_API __attribute__((visibility("default")))
#else
#define ED_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ed_status {
  ED_OK = 0,
  ED_INVALID_ARGUMENT = 1,
  ED_IO = 2,
  ED_PARSE = 3,
  ED_NOT_FOUND = 4,
  ED_UNKNOWN_LABEL_ID = 5,
  ED_UNKNOWN_LABEL_TYPE = 6,
  ED_CONFLICT = 7,
  ED_CYCLE = 8,
  ED_INTERNAL = 99
} ed_status;

/* Opaque handles. */
typedef struct ed_store ed_store;
typedef struct ed_labels ed_labels;
typedef struct ed_graph ed_graph;

ED_API const char *ed_version(void);
ED_API const char *ed_status_name(ed_status status);

/* Message of the last failing call on this thread; "" if none. */
ED_API const char *ed_last_error(void);

/* Frees any string returned through a char** out parameter. */
ED_API void ed_string_free(char *s);

/* Event store. ed_store_open creates the layout in a missing or empty dir. */
ED_API ed_status ed_store_open(const char *dir, ed_store **out);
ED_API void ed_store_close(ed_store *store);
/* report_json: IngestReport object. Per-file errors are part of the report,
 * not of the status. */
ED_API ed_status ed_store_ingest(ed_store *store, const char *const *paths, size_t count,
                                 unsigned threads, char **report_json);
/* {"months": [...], "coverage_start": ..., "repos": n} */
ED_API ed_status ed_store_info(const ed_store *store, char **info_json);

/* Labels. root may be NULL for an empty store. */
ED_API ed_status ed_labels_load(const char *root, ed_labels **out);
/* labels_json: array of label objects each carrying "id". */
ED_API ed_status ed_labels_inject(const ed_labels *labels, const char *labels_json,
                                  ed_labels **out);
ED_API void ed_labels_free(ed_labels *labels);
/* Results are {"orgs": [...], "repos": [...], "users": [...]}. */
ED_API ed_status ed_labels_resolve(const ed_labels *labels, const char *ref, char **set_json);
ED_API ed_status ed_labels_intersect(const ed_labels *labels, const char *const *refs,
                                     size_t count, char **set_json);
ED_API ed_status ed_labels_union(const ed_labels *labels, const char *const *refs,
                                 size_t count, char **set_json);

/* args_json: {"window": "2019", "weights": {...}, "scope":
 * "developer_repo"|"developer"|"repo", "limit": n}. Output: array of
 * {entity, window, counts, score}. */
ED_API ed_status ed_activity(const ed_store *store, const char *args_json, char **rows_json);

/* Project network.
 * args_json: {"window", "weights", "bot_threshold", "threads"}. */
ED_API ed_status ed_graph_build(const ed_store *store, const char *args_json, ed_graph **out);
ED_API ed_status ed_graph_read(const char *edge_list, ed_graph **out);
ED_API ed_status ed_graph_write(const ed_graph *graph, char **edge_list);
ED_API void ed_graph_free(ed_graph *graph);
ED_API size_t ed_graph_node_count(const ed_graph *graph);
ED_API size_t ed_graph_edge_count(const ed_graph *graph);
ED_API ed_status ed_graph_components(const ed_graph *graph, size_t limit, char **report_json);
ED_API ed_status ed_graph_related(const ed_graph *graph, int64_t project, size_t k,
                                  char **rows_json);
/* config_json: {"damping", "tol", "max_iter", "scale": "raw"|"times_n",
 * "limit"}; NULL for defaults. Output: {iterations, converged, nodes, rows}. */
ED_API ed_status ed_graph_influence(const ed_graph *graph, const char *config_json,
                                    char **result_json);

/* args_json: {"metric", "repo" (id) or "repoName", "window", "options"}. */
ED_API ed_status ed_metric(const ed_store *store, const char *args_json, char **result_json);
/* Lists the metric registry. */
ED_API ed_status ed_metric_names(char **names_json);

/* request_json uses the query parameter names verbatim. labels may be NULL.
 * format: "json" or "csv". */
ED_API ed_status ed_query(const ed_store *store, const ed_labels *labels,
                          const char *request_json, const char *format, char **output);

/* Parses one archive line; ED_NOT_FOUND when the line is not an event. */
ED_API ed_status ed_parse_event_line(const char *line, size_t length, char **event_json);

/* Behaviors in order: comment, open_issue, open_pr, review_pr, pr_merged.
 * weights may be NULL for the defaults. */
ED_API ed_status ed_activity_score(const uint64_t counts[5], const double weights[5],
                                   double *score);

#ifdef __cplusplus
}
#endif

#endif /* ECODIGGER_ECODIGGER_H_ */
