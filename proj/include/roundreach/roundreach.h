#ifndef ROUNDREACH_H
#define ROUNDREACH_H

#include <stddef.h>
#include <stdint.h>

#if defined(ROUNDREACH_BUILDING_LIBRARY)
#define ROUNDREACH_API __attribute__((visibility("default")))
#else
#define ROUNDREACH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum roundreach_status {
    ROUNDREACH_OK = 0,
    ROUNDREACH_E_INVALID_ARGUMENT,
    ROUNDREACH_E_PARSE,
    ROUNDREACH_E_ORDER_MISMATCH,
    ROUNDREACH_E_NOT_REAL,
    ROUNDREACH_E_ZERO_INPUT,
    ROUNDREACH_E_MODULUS_ONE,
    ROUNDREACH_E_SINGULAR,
    ROUNDREACH_E_VALIDATION_FAILED,
    ROUNDREACH_E_NONRATIONAL_SPECTRUM,
    ROUNDREACH_E_UNSUPPORTED_ANGLE,
    ROUNDREACH_E_UNSUPPORTED_COMBINATION,
    ROUNDREACH_E_GADGET_BROKEN,
    ROUNDREACH_E_NONCANONICAL_PREFIX,
    ROUNDREACH_E_TOO_LARGE,
    ROUNDREACH_E_UNDECIDABLE_TIE,
    ROUNDREACH_E_IO,
    ROUNDREACH_E_INTERNAL,
    ROUNDREACH_E_UNKNOWN
} roundreach_status;

typedef enum roundreach_outcome {
    ROUNDREACH_REACHED = 0,
    ROUNDREACH_NOT_REACHED = 1,
    ROUNDREACH_UNDECIDED = 2
} roundreach_outcome;

typedef enum roundreach_bounds_view {
    ROUNDREACH_BOUNDS_AUTO = 0,
    ROUNDREACH_BOUNDS_HYPERBOLIC = 1,
    ROUNDREACH_BOUNDS_POLAR = 2,
    ROUNDREACH_BOUNDS_TRUNCATION = 3
} roundreach_bounds_view;

typedef struct roundreach_instance roundreach_instance;

typedef struct roundreach_decide_options {
    /* nonzero: explore the orbit with a visited set instead of deciding */
    int oracle;
    uint64_t oracle_steps;
    uint64_t memory_budget;
} roundreach_decide_options;

ROUNDREACH_API const char* roundreach_version(void);
ROUNDREACH_API const char* roundreach_status_name(roundreach_status status);
/* Message of the last failed call on this thread ("" if none). */
ROUNDREACH_API const char* roundreach_last_error(void);

/* Strings returned through char** are owned by the caller. */
ROUNDREACH_API void roundreach_string_free(char* s);

ROUNDREACH_API void roundreach_decide_options_init(roundreach_decide_options* options);

ROUNDREACH_API roundreach_status roundreach_instance_parse(const char* json, roundreach_instance** out);
ROUNDREACH_API roundreach_status roundreach_instance_load(const char* path, roundreach_instance** out);
ROUNDREACH_API roundreach_status roundreach_instance_save(const roundreach_instance* instance, const char* path);
ROUNDREACH_API roundreach_status roundreach_instance_serialize(const roundreach_instance* instance, char** out);
ROUNDREACH_API size_t roundreach_instance_dimension(const roundreach_instance* instance);
ROUNDREACH_API void roundreach_instance_free(roundreach_instance* instance);

/* verdict_json (optional) receives a single-line JSON object. */
ROUNDREACH_API roundreach_status roundreach_decide(const roundreach_instance* instance,
                                                   const roundreach_decide_options* options,
                                                   roundreach_outcome* outcome, char** verdict_json);
ROUNDREACH_API roundreach_status roundreach_simulate(const roundreach_instance* instance, uint64_t steps,
                                                     char** trace_json);
ROUNDREACH_API roundreach_status roundreach_bounds(const roundreach_instance* instance, roundreach_bounds_view view,
                                                   char** report);

/* family: "floor", "ceil" or "minerr"; perturb: "p/q" or NULL; pad: nonzero inserts
   unused variables until the prefix alternates forall/exists. summary_json (optional)
   describes the compiled program. */
ROUNDREACH_API roundreach_status roundreach_compile_qbf(const char* qbf_text, const char* family,
                                                        const char* perturb, int pad, roundreach_instance** out,
                                                        char** summary_json);
/* Truth value of a QBF by brute force (limit 16 variables). */
ROUNDREACH_API roundreach_status roundreach_evaluate_qbf(const char* qbf_text, int* value);

/* Rotate (x, y) by theta and round both coordinates to nearest, ties up. */
ROUNDREACH_API roundreach_status roundreach_rotate_point(int64_t x, int64_t y, const char* theta, int64_t* out_x,
                                                         int64_t* out_y);
/* Runs every lattice point of the radius-r disk; writes the CSV grid to csv_path when
   non-NULL. summary_json (optional) reports counts and orbit statistics. */
ROUNDREACH_API roundreach_status roundreach_rotate_disk(int64_t radius, const char* theta, uint64_t budget,
                                                        const char* csv_path, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif
