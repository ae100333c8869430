#ifndef SUBSEARCH_H
#define SUBSEARCH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(SUBSEARCH_BUILD)
#define SS_API __attribute__((visibility("default")))
#else
#define SS_API
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_INVALID_ARGUMENT,
  SS_ERR_INVALID_INSTANCE,
  SS_ERR_PARAMS_OUT_OF_RANGE,
  SS_ERR_CONFIG,
  SS_ERR_IO,
  SS_ERR_EDGE_NOT_IN_CONTEXT,
  SS_ERR_NO_LEGAL_EDGES,
  SS_ERR_NEGATIVE_HEURISTIC,
  SS_ERR_ZERO_DIST,
  SS_ERR_DANGLING_PARENT,
  SS_ERR_MISSING_INSTRUMENTATION,
  SS_ERR_INVALID_WITNESS,
  SS_ERR_BUDGET_EXCEEDED,
  SS_ERR_ORACLE_BUDGET_EXCEEDED,
  SS_ERR_INADMISSIBLE_HEURISTIC,
  SS_ERR_MIXED_CONFIG_HASH,
  SS_ERR_INTERNAL,
  SS_ERR_OUT_OF_MEMORY
} ss_status;

typedef struct ss_instance ss_instance;
typedef struct ss_config ss_config;
typedef struct ss_result ss_result;

SS_API const char* ss_version(void);
SS_API const char* ss_status_name(ss_status status);
/* Message of the last failed call on this thread; empty when none. */
SS_API const char* ss_last_error(void);
/* Every char* handed out by this library is released with ss_string_free. */
SS_API void ss_string_free(char* s);

/* Instances */
SS_API ss_status ss_instance_generate(const char* domain, const char* params_json, uint64_t seed,
                                      ss_instance** out);
SS_API ss_status ss_instance_from_json(const char* json, ss_instance** out);
SS_API ss_status ss_instance_to_json(const ss_instance* inst, char** out);
SS_API ss_status ss_instance_is_goal_start(const ss_instance* inst, int* out);
SS_API void ss_instance_free(ss_instance* inst);

/* Run configuration (JSON document) */
SS_API ss_status ss_config_from_json(const char* json, ss_config** out);
SS_API ss_status ss_config_to_json(const ss_config* cfg, char** out);
SS_API ss_status ss_config_hash(const ss_config* cfg, char** out);
SS_API ss_status ss_config_suite_instance(const ss_config* cfg, int index, ss_instance** out);
SS_API void ss_config_free(ss_config* cfg);

/* Experiments. Each produces a result holding a JSON document and, where
   meaningful, a long-format CSV. */
SS_API ss_status ss_solve(const ss_config* cfg, const ss_instance* inst, ss_result** out);
SS_API ss_status ss_bench(const ss_config* cfg, ss_result** out);
/* eps_json: array of numbers or "to-zero"; baseline_json: policy patch or NULL. */
SS_API ss_status ss_sweep_eps(const ss_config* cfg, const char* eps_json, const char* baseline_json,
                              ss_result** out);
/* kinds_json: array of evaluation names, or NULL for the standard four. */
SS_API ss_status ss_ablate_eval(const ss_config* cfg, const char* kinds_json, ss_result** out);
SS_API ss_status ss_bound_check(const ss_config* cfg, ss_result** out);

SS_API ss_status ss_result_json(const ss_result* res, int include_wall_clock, char** out);
SS_API ss_status ss_result_csv(const ss_result* res, char** out);
/* Runs that errored or failed to finish within the budget for reasons other
   than search itself (for bound checks: reports that could not be built). */
SS_API ss_status ss_result_failures(const ss_result* res, size_t* out);
SS_API void ss_result_free(ss_result* res);

/* Utilities */
SS_API ss_status ss_build_demos(const char* domain, const char* params_json, int count, uint64_t base_seed,
                                double noise, char** out_jsonl);
/* method: "bfs", "idastar" or "idastar-domain". */
SS_API ss_status ss_oracle_solve(const ss_instance* inst, const char* method, char** out_json);
SS_API ss_status ss_plotdata(const char* const* results_json, size_t count, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif
