/* C interface to the supply-chain rewiring simulator. All fallible calls
 * return a status code; scn_last_error() holds the message for the most
 * recent failure on the calling thread. Strings returned through char**
 * out-parameters are heap-allocated and must be released with
 * scn_string_free(); handles with their matching *_free(). */

#ifndef SCNSIM_H
#define SCNSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct scn_network scn_network_t;
typedef struct scn_scopes scn_scopes_t;

typedef enum scn_status {
    SCN_OK = 0,
    SCN_ERROR_INVALID_ARGUMENT = 1,
    SCN_ERROR_PARSE = 2,
    SCN_ERROR_IO = 3,
    SCN_ERROR_RUNTIME = 4
} scn_status;

const char* scn_last_error(void);

void scn_string_free(char* s);
void scn_network_free(scn_network_t* net);
void scn_scopes_free(scn_scopes_t* scopes);

/* Ingest firms/products/edges CSV tables. On success *out owns the network;
 * when ingest_json_out is non-NULL it receives the ingest report (row counts
 * and per-row rejections) as JSON. */
scn_status scn_network_load(const char* firms_csv, const char* products_csv,
                            const char* edges_csv, scn_network_t** out,
                            char** ingest_json_out);

/* Synthesize a network. config_json NULL or empty means defaults; otherwise a
 * generator-config JSON object. seed_override, when non-negative, replaces the
 * config's seed. */
scn_status scn_network_generate(const char* config_json, int64_t seed_override,
                                scn_network_t** out);

/* Write firms.csv / products.csv / edges.csv under dir. */
scn_status scn_network_write(const scn_network_t* net, const char* dir);

size_t scn_network_firm_count(const scn_network_t* net);
size_t scn_network_product_count(const scn_network_t* net);
size_t scn_network_edge_count(const scn_network_t* net);

/* Metric report as JSON. options_json (nullable): {"path_mode": "exact" or
 * "sampled", "path_samples": N, "seed": N}. */
scn_status scn_network_metrics(const scn_network_t* net, const char* options_json,
                               char** json_out);

/* Same metrics as a single-column CSV table (11 rows), column labeled. */
scn_status scn_network_metrics_table(const scn_network_t* net, const char* options_json,
                                     const char* label, char** csv_out);

/* Calibration check against the built-in targets (targets_json NULL) or a
 * JSON array of {"name", "target", "tolerance"}. Result rows as JSON;
 * *all_within set to 1 when every row is inside its tolerance. */
scn_status scn_calibrate_check(const scn_network_t* net, const char* targets_json,
                               uint64_t metric_seed, char** json_out, int* all_within);

/* Built-in geopolitical risk tiers and regional clusters. */
scn_status scn_scopes_builtin(scn_scopes_t** out);
scn_status scn_scopes_load(const char* path, scn_scopes_t** out);
scn_status scn_scopes_to_json(const scn_scopes_t* scopes, char** json_out);

/* One line per cluster: "<name>: <count> countries". */
scn_status scn_scopes_list(const scn_scopes_t* scopes, char** text_out);

/* Apply one rewiring policy. request_json:
 *   {"policy": "country_plus_one" | "friendshoring" | "reshoring",
 *    "S": <cluster name or selector object>,
 *    "X": <same, country_plus_one only>,
 *    "selection": "all" | "sample:K",
 *    "seed": N}
 * On success *net_after owns the rewired network and *outcome_json the
 * rewiring summary (edge deltas, NS sets, affected breakdowns). */
scn_status scn_apply_policy(const scn_network_t* net, const scn_scopes_t* scopes,
                            const char* request_json, scn_network_t** net_after,
                            char** outcome_json);

/* Run a scenario suite. scenarios_json: a scenario object or
 * {"scenarios": [...]}. overrides_json (nullable) may set master_seed,
 * iterations, selection, path_mode or path_samples on every scenario.
 * out_dir (nullable): report directory. *summary_json receives the
 * per-scenario summary array. */
scn_status scn_run_scenarios(const char* scenarios_json, const char* overrides_json,
                             const char* out_dir, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* SCNSIM_H */
