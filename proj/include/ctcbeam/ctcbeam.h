/*
 * ctcbeam C API.
 *
 * Opaque handles wrap a scenario (the full parameter set of one experiment)
 * and a completed fixed-point run. Every fallible call returns a ctcb_status;
 * on failure ctcb_last_error() holds a message for the calling thread.
 * Distinct handles may be used concurrently from different threads.
 */
#ifndef CTCBEAM_H
#define CTCBEAM_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(CTCB_BUILDING_LIBRARY)
#define CTCB_API __declspec(dllexport)
#else
#define CTCB_API __declspec(dllimport)
#endif
#else
#define CTCB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ctcb_status {
    CTCB_OK = 0,
    CTCB_ERR_INVALID_ARGUMENT = 1,
    CTCB_ERR_CONFIG = 2,
    CTCB_ERR_LOOKUP = 3,
    CTCB_ERR_NUMERIC_BLOWUP = 4,
    CTCB_ERR_IO = 5,
    CTCB_ERR_BUFFER_TOO_SMALL = 6,
    CTCB_ERR_INTERNAL = 7
} ctcb_status;

typedef enum ctcb_convergence {
    CTCB_CONVERGED = 0,
    CTCB_DIVERGED = 1,
    CTCB_MAX_ITERATIONS = 2
} ctcb_convergence;

typedef struct ctcb_scenario ctcb_scenario;
typedef struct ctcb_run ctcb_run;

CTCB_API const char* ctcb_version(void);

/* Message for the most recent failure on this thread ("" if none). */
CTCB_API const char* ctcb_last_error(void);

/* Preset registry. Returned strings live for the lifetime of the library. */
CTCB_API size_t ctcb_preset_count(void);
CTCB_API const char* ctcb_preset_name(size_t index);
CTCB_API const char* ctcb_preset_description(size_t index);

CTCB_API ctcb_status ctcb_scenario_from_preset(const char* name, ctcb_scenario** out);
/* Parses `key = value` config text (optionally starting with `preset = NAME`). */
CTCB_API ctcb_status ctcb_scenario_from_config(const char* text, ctcb_scenario** out);
CTCB_API ctcb_status ctcb_scenario_from_file(const char* path, ctcb_scenario** out);
CTCB_API ctcb_status ctcb_scenario_clone(const ctcb_scenario* s, ctcb_scenario** out);
CTCB_API void ctcb_scenario_free(ctcb_scenario* s);

CTCB_API ctcb_status ctcb_scenario_set(ctcb_scenario* s, const char* key, const char* value);

/*
 * String outputs follow one convention: `needed` (if non-null) receives the
 * length including the terminating NUL; when `buf` is null or `len` is too
 * small nothing is copied and CTCB_ERR_BUFFER_TOO_SMALL is returned (unless
 * buf is null, which is a pure size query returning CTCB_OK).
 */
CTCB_API ctcb_status ctcb_scenario_get(const ctcb_scenario* s, const char* key, char* buf,
                                       size_t len, size_t* needed);
CTCB_API ctcb_status ctcb_scenario_manifest(const ctcb_scenario* s, char* buf, size_t len,
                                            size_t* needed);
/* Violations joined by '\n'; `count` receives their number (0 = valid). */
CTCB_API ctcb_status ctcb_scenario_validate(const ctcb_scenario* s, size_t* count, char* buf,
                                            size_t len, size_t* needed);
CTCB_API int ctcb_is_numeric_parameter(const char* key);

CTCB_API ctcb_status ctcb_scenario_loop_gain(const ctcb_scenario* s, double probe_scale,
                                             double* gain);

/* Runs the fixed-point iteration with the scenario's solver.tol/max_iter. */
CTCB_API ctcb_status ctcb_solve(const ctcb_scenario* s, ctcb_run** out);
CTCB_API void ctcb_run_free(ctcb_run* r);

CTCB_API ctcb_convergence ctcb_run_status(const ctcb_run* r);
CTCB_API size_t ctcb_run_iterations(const ctcb_run* r);
CTCB_API ctcb_status ctcb_run_iteration(const ctcb_run* r, size_t index, double* residual,
                                        double* window_norm, double* total_density);
CTCB_API double ctcb_run_final_window_norm(const ctcb_run* r);
CTCB_API double ctcb_run_final_total_density(const ctcb_run* r);

/* Writes maps, convergence log and manifest into `dir`; csv != 0 adds CSV maps. */
CTCB_API ctcb_status ctcb_run_write_outputs(const ctcb_run* r, const char* dir, int csv);

#ifdef __cplusplus
}
#endif

#endif /* CTCBEAM_H */
