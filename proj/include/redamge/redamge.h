#ifndef REDAMGE_H
#define REDAMGE_H

/* C interface to the redamge library. All objects are opaque handles; every
 * function returns a status code and, on failure, leaves a message that
 * redamge_last_error() returns until the next call on the same thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define REDAMGE_API __attribute__((visibility("default")))
#else
#define REDAMGE_API
#endif

typedef enum redamge_status {
  REDAMGE_OK = 0,
  REDAMGE_E_INVALID = 1,
  REDAMGE_E_CONFIG = 2,
  REDAMGE_E_BUILD = 3,
  REDAMGE_E_ESTIMATOR = 4,
  REDAMGE_E_IO = 5,
  REDAMGE_E_KIND = 6,
  REDAMGE_E_DIMENSION = 7,
  REDAMGE_E_SOLVER = 8,
  REDAMGE_E_CONFORMITY = 9,
  REDAMGE_E_PARTITION = 10,
  REDAMGE_E_INTERNAL = 99
} redamge_status;

typedef struct redamge_config redamge_config;
typedef struct redamge_plan redamge_plan;

REDAMGE_API const char* redamge_last_error(void);

/* Configuration. Keys for redamge_config_set are "section.name". */
REDAMGE_API int redamge_config_default(redamge_config** out);
REDAMGE_API int redamge_config_load(const char* path, redamge_config** out);
REDAMGE_API int redamge_config_set(redamge_config* cfg, const char* key, const char* value);
REDAMGE_API void redamge_config_free(redamge_config* cfg);

/* Commands. Log text goes to stdout. */
REDAMGE_API int redamge_cmd_plan(const redamge_config* cfg, const char* outdir);
REDAMGE_API int redamge_cmd_build(const redamge_config* cfg, const char* outdir);
REDAMGE_API int redamge_cmd_mlmc(const redamge_config* cfg, const char* outdir);

/* Hierarchy planning without a mesh. */
REDAMGE_API int redamge_plan_create(int64_t global_elements, int64_t n_cores, double factor, int64_t beta_c,
                                    int64_t min_local, int redistribution, redamge_plan** out);
REDAMGE_API int redamge_plan_num_levels(const redamge_plan* plan, int* n);
REDAMGE_API int redamge_plan_level(const redamge_plan* plan, int level, int64_t* global_elements,
                                   int64_t* local_elements, int64_t* active_cores, int* redistributed);
REDAMGE_API void redamge_plan_free(redamge_plan* plan);

/* Optimal MLMC sample counts; N_real may be NULL. */
REDAMGE_API int redamge_optimal_samples(size_t n_levels, const double* V, const double* C, double epsilon,
                                        double* N_real, int64_t* N);

#ifdef __cplusplus
}
#endif

#endif
