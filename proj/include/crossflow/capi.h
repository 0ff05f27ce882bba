/* C interface to the intersection scheduler: opaque handles, status codes,
 * and JSON/CSV strings. Every returned string is heap-allocated and must be
 * released with cf_string_free; handles with their matching *_free call.
 * Errors set a thread-local message readable via cf_last_error_message. */
#ifndef CROSSFLOW_CAPI_H
#define CROSSFLOW_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_ERROR_INVALID_ARGUMENT = 1, /* bad handle, flag, or precondition */
  CF_ERROR_PARSE = 2,            /* malformed JSON or wrong field types */
  CF_ERROR_VALIDATION = 3,       /* well-formed input violating invariants */
  CF_ERROR_UNSUPPORTED = 4,      /* request outside supported limits */
  CF_ERROR_INTERNAL = 5          /* invariant breach inside the library */
} cf_status;

typedef struct cf_instance cf_instance;
typedef struct cf_schedule cf_schedule;

/* Message for the most recent failure on this thread; empty string if none.
 * The pointer stays valid until the next failing call on the same thread. */
const char* cf_last_error_message(void);

/* ---- Instances ---- */

cf_status cf_instance_from_json(const char* json_text, cf_instance** out);
/* Seeded random instance with `num_vehicles` vehicles and default params. */
cf_status cf_instance_random(uint64_t seed, int num_vehicles, cf_instance** out);
cf_status cf_instance_to_json(const cf_instance* inst, char** out);
/* Queue lengths for lanes 1..4 into per_lane[0..3]. */
cf_status cf_instance_lane_counts(const cf_instance* inst, int per_lane[4]);
void cf_instance_free(cf_instance* inst);

/* ---- Solving ---- */

/* strategy: "dp", "fifo", or "enum" (enumeration refuses > 10 vehicles). */
cf_status cf_solve(const cf_instance* inst, const char* strategy, cf_schedule** out);
cf_status cf_schedule_makespan(const cf_schedule* schedule, double* out);
cf_status cf_schedule_to_json(const cf_schedule* schedule, char** out);
cf_status cf_schedule_to_csv(const cf_schedule* schedule, char** out);
/* Independent constraint re-check; writes the violation count (0 = valid)
 * and, when report_out is non-null, a newline-separated description. */
cf_status cf_schedule_validate(const cf_schedule* schedule, const cf_instance* inst,
                               int* violations, char** report_out);
void cf_schedule_free(cf_schedule* schedule);

/* ---- Verification, simulation, sweeps ---- */

/* config: "all_conflict" or "all_straight". Emits a one-row counts CSV. */
cf_status cf_verify_counts(const int per_lane[4], const char* config, char** csv_out);

/* config_json: simulation config document (see library docs). Returns the
 * deterministic metrics JSON and, when log_csv_out is non-null, the event
 * log. timings_json_out (optional) receives wall-clock replan statistics. */
cf_status cf_simulate(const char* config_json, char** metrics_json_out,
                      char** log_csv_out, char** timings_json_out);

/* spec_json: {"n_min","n_max","seeds","seed_base","enum_cap"}, all optional.
 * Returns the deterministic comparison CSV; timings_csv_out (optional)
 * receives the wall-clock companion table. */
cf_status cf_compare(const char* spec_json, char** csv_out, char** timings_csv_out);

/* spec_json: {"totals": [..], "reps"}; totals must be divisible by 4. */
cf_status cf_bench(const char* spec_json, char** csv_out);

void cf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CROSSFLOW_CAPI_H */
