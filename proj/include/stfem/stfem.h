/* SPDX-License-Identifier: Apache-2.0 */
#ifndef STFEM_H
#define STFEM_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(STFEM_BUILDING)
#define STFEM_API __declspec(dllexport)
#else
#define STFEM_API __declspec(dllimport)
#endif
#else
#define STFEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stfem_status {
  STFEM_OK = 0,
  STFEM_ERROR_INVALID_ARGUMENT = 1,
  STFEM_ERROR_RANGE = 2,
  STFEM_ERROR_LINEAR_SOLVE = 3,
  STFEM_ERROR_SINGULAR = 4,
  STFEM_ERROR_IO = 5,
  /* A study finished but at least one level failed; the report is valid. */
  STFEM_ERROR_LEVEL_FAILED = 6,
  STFEM_ERROR_INTERNAL = 7
} stfem_status;

typedef enum stfem_solution {
  STFEM_UNLIFTED = 0,
  STFEM_LIFTED = 1
} stfem_solution;

typedef enum stfem_quantity {
  STFEM_E0_LINF = 0,
  STFEM_E1_LINF = 1,
  STFEM_E0_L2 = 2,
  STFEM_E1_L2 = 3,
  STFEM_ENERGY_LINF = 4,
  STFEM_ENERGY_L2 = 5
} stfem_quantity;

typedef enum stfem_format {
  STFEM_FORMAT_CSV_UNLIFTED = 0,
  STFEM_FORMAT_CSV_LIFTED = 1,
  STFEM_FORMAT_MARKDOWN = 2
} stfem_format;

typedef struct stfem_config stfem_config;
typedef struct stfem_report stfem_report;

typedef struct stfem_energy_result {
  int steps;
  double initial_energy;
  double base_drift;   /* max_n |E_n - E_0| / E_0 */
  double lifted_drift;
  /* max_n |E(lifted)_n - E_n| / E_0 */
  double max_node_mismatch;
} stfem_energy_result;

STFEM_API const char* stfem_version(void);
STFEM_API const char* stfem_status_string(stfem_status status);
/* Message of the last failed call on this thread ("" if none). */
STFEM_API const char* stfem_last_error(void);

STFEM_API stfem_status stfem_config_create(stfem_config** out);
STFEM_API void stfem_config_destroy(stfem_config* config);
STFEM_API stfem_status stfem_config_set(stfem_config* config, const char* key,
                                        const char* value);
/* Copies the value as a NUL-terminated string. *needed (optional) receives
   the required buffer size including the terminator. */
STFEM_API stfem_status stfem_config_get(const stfem_config* config,
                                        const char* key, char* buffer,
                                        size_t buffer_size, size_t* needed);
STFEM_API stfem_status stfem_config_load_file(stfem_config* config,
                                              const char* path);
/* Number of keys, and the name of key i (NULL when out of range). */
STFEM_API size_t stfem_config_key_count(void);
STFEM_API const char* stfem_config_key(size_t index);

/* Runs all levels; writes tables when output_prefix is set. On
   STFEM_ERROR_LEVEL_FAILED *out still holds a report. */
STFEM_API stfem_status stfem_run_study(const stfem_config* config,
                                       stfem_report** out);
/* A one-row report for the given level. */
STFEM_API stfem_status stfem_run_single(const stfem_config* config, int level,
                                        stfem_report** out);
STFEM_API stfem_status stfem_run_energy(const stfem_config* config,
                                        stfem_energy_result* out);

STFEM_API size_t stfem_report_level_count(const stfem_report* report);
STFEM_API stfem_status stfem_report_level(const stfem_report* report,
                                          size_t row, int* level, double* tau,
                                          double* h);
STFEM_API stfem_status stfem_report_error(const stfem_report* report,
                                          size_t row, stfem_solution solution,
                                          stfem_quantity quantity,
                                          double* value);
/* NaN on the first row or when undefined. */
STFEM_API stfem_status stfem_report_eoc(const stfem_report* report, size_t row,
                                        stfem_solution solution,
                                        stfem_quantity quantity, double* value);
STFEM_API size_t stfem_report_failure_count(const stfem_report* report);
STFEM_API const char* stfem_report_failure(const stfem_report* report,
                                           size_t index);
STFEM_API stfem_status stfem_report_write(const stfem_report* report,
                                          const char* prefix);
STFEM_API stfem_status stfem_report_read(const char* prefix,
                                         stfem_report** out);
STFEM_API stfem_status stfem_report_format(const stfem_report* report,
                                           stfem_format format, char* buffer,
                                           size_t buffer_size, size_t* needed);
STFEM_API void stfem_report_destroy(stfem_report* report);

#ifdef __cplusplus
}
#endif

#endif /* STFEM_H */
