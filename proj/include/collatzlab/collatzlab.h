/*
 * collatzlab C API.
 *
 * Every entry point returns a clab_status. On failure a one-line message is
 * available from clab_last_error() on the same thread until the next call.
 * Objects are opaque handles released with the matching *_free function;
 * strings returned through `char**` are released with clab_string_free.
 *
 * Values that may exceed 64 bits (starts, trajectory elements, peaks) cross
 * the API as decimal strings. Counts and bounds are uint64_t.
 */
#ifndef COLLATZLAB_H
#define COLLATZLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef CLAB_BUILDING_LIBRARY
#    define CLAB_API __declspec(dllexport)
#  else
#    define CLAB_API __declspec(dllimport)
#  endif
#else
#  define CLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clab_status {
  CLAB_OK = 0,
  CLAB_INVALID_ARGUMENT = 1,
  CLAB_OVERFLOW = 2,
  CLAB_STEP_CAP_EXCEEDED = 3,
  CLAB_IO_ERROR = 4,
  CLAB_CHECKPOINT_VERSION = 5,
  CLAB_CHECKPOINT_CORRUPT = 6,
  CLAB_CHECKPOINT_MISMATCH = 7,
  CLAB_RANGE_ERROR = 8,
  CLAB_INTERNAL_ERROR = 9
} clab_status;

typedef enum clab_format {
  CLAB_FORMAT_TEXT = 0,
  CLAB_FORMAT_CSV = 1,
  CLAB_FORMAT_STRUCTURED = 2 /* JSON */
} clab_format;

#define CLAB_UNLIMITED UINT64_MAX
#define CLAB_DEFAULT_STEP_CAP 100000u

CLAB_API const char* clab_version(void);
CLAB_API const char* clab_status_name(clab_status status);
CLAB_API const char* clab_last_error(void);
CLAB_API void clab_string_free(char* s);

/* "100_000", "1e8", "2.5e6", "2^40". Zero is rejected. */
CLAB_API clab_status clab_parse_count(const char* text, uint64_t* out);

/* ---- core -------------------------------------------------------------- */

/* *label is 'a'..'f', or 0 when 3 divides v. */
CLAB_API clab_status clab_form_of(const char* value, char* label);
/* *label is 'A'..'D'; *reduced must hold at least `capacity` bytes. */
CLAB_API clab_status clab_mod4(const char* value, char* label, char* reduced, size_t capacity);

/* ---- trajectories ------------------------------------------------------ */

typedef struct clab_trajectory clab_trajectory;

/* Classification only; clab_trajectory_length() is 0. */
CLAB_API clab_status clab_classify(const char* start, uint64_t step_cap, clab_trajectory** out);
/* Compressed trajectory start .. 2^m. */
CLAB_API clab_status clab_trace(const char* start, uint64_t step_cap, clab_trajectory** out);
/* FSM states from the entry state to the power-of-two state. */
CLAB_API clab_status clab_fsm_trace(const char* start, uint64_t step_cap, clab_trajectory** out);

CLAB_API char clab_trajectory_form(const clab_trajectory* t);
CLAB_API uint64_t clab_trajectory_exponent(const clab_trajectory* t);
CLAB_API uint64_t clab_trajectory_steps(const clab_trajectory* t);
CLAB_API const char* clab_trajectory_start(const clab_trajectory* t);
CLAB_API const char* clab_trajectory_peak(const clab_trajectory* t);
/* FSM traces only: compressed steps spent leaving the multiples of 3. */
CLAB_API uint64_t clab_trajectory_entry_steps(const clab_trajectory* t);
CLAB_API size_t clab_trajectory_length(const clab_trajectory* t);
/* Element i as a decimal value (the state's value 9n+r for FSM traces). */
CLAB_API const char* clab_trajectory_value(const clab_trajectory* t, size_t i);
/* FSM traces only; form 0 and NULL index otherwise. */
CLAB_API char clab_trajectory_state_form(const clab_trajectory* t, size_t i);
CLAB_API const char* clab_trajectory_state_index(const clab_trajectory* t, size_t i);
CLAB_API clab_status clab_trajectory_render(const clab_trajectory* t, clab_format format, char** out);
CLAB_API void clab_trajectory_free(clab_trajectory* t);

/* ---- sweeps ------------------------------------------------------------ */

typedef struct clab_sweep_options {
  uint32_t workers;             /* >= 1 */
  uint64_t chunk;               /* >= 1 */
  int memo;                     /* nonzero: memoize terminating forms */
  uint64_t memo_budget_bytes;
  uint64_t step_cap;
  uint64_t capture_limit[6];    /* per form a..f; CLAB_UNLIMITED allowed */
  const char* checkpoint_path;  /* NULL: no checkpointing */
  uint64_t checkpoint_interval; /* starts between checkpoint saves */
  int resume;                   /* continue from checkpoint_path when present */
  uint64_t halt_after;          /* 0: run to the end */
} clab_sweep_options;

CLAB_API void clab_sweep_options_init(clab_sweep_options* options);

typedef struct clab_sweep clab_sweep;

/* Rows at each threshold (optional, any order) and at n. */
CLAB_API clab_status clab_sweep_run(uint64_t n, const uint64_t* thresholds, size_t threshold_count,
                                    const clab_sweep_options* options, clab_sweep** out);
/* Rows at 10^p for each p in powers (ascending). */
CLAB_API clab_status clab_table3(const uint32_t* powers, size_t count,
                                 const clab_sweep_options* options, clab_sweep** out);

CLAB_API size_t clab_sweep_row_count(const clab_sweep* s);
/* counts receives six values in form order a..f. */
CLAB_API clab_status clab_sweep_row(const clab_sweep* s, size_t row, uint64_t* n, uint64_t counts[6]);
CLAB_API clab_status clab_sweep_members(const clab_sweep* s, char form, const uint64_t** data,
                                        size_t* length);
CLAB_API int clab_sweep_complete(const clab_sweep* s);
CLAB_API uint64_t clab_sweep_next_unprocessed(const clab_sweep* s);
CLAB_API double clab_sweep_wall_seconds(const clab_sweep* s);
CLAB_API clab_status clab_sweep_render(const clab_sweep* s, clab_format format, char** out);
CLAB_API void clab_sweep_free(clab_sweep* s);

/* ---- sets and factorizations ------------------------------------------ */

/* "3^2 × 7 × 19 × 73" (UTF-8); "1" for 1. */
CLAB_API clab_status clab_factorize(const char* value, char** out);
/* *members is released with clab_u64_free. */
CLAB_API clab_status clab_build_set(char form, uint64_t bound, const clab_sweep_options* options,
                                    uint64_t** members, size_t* length);
CLAB_API void clab_u64_free(uint64_t* p);
/* Members (with factorizations when with_factors), power-of-two exponent
 * scan, and gap views when with_gaps. */
CLAB_API clab_status clab_set_report(char form, uint64_t bound, int with_factors, int with_gaps,
                                     const clab_sweep_options* options, clab_format format,
                                     char** out);

/* ---- verification suites ---------------------------------------------- */

typedef struct clab_report clab_report;

/* suite: "cycle" (max = max m, default 600), "oracle" (default 1e5),
 * "scaling" (max = x_max, default 1e4; aux = i_max, default 20),
 * "partition" (default 1e6), "memo" (default 1e5),
 * "fsm" (max = conjugacy bound, default 1e6; aux = trace bound, default 1e5).
 * Zero selects the default. */
CLAB_API clab_status clab_verify(const char* suite, uint64_t max, uint64_t aux,
                                 const clab_sweep_options* options, clab_report** out);
CLAB_API int clab_report_passed(const clab_report* r);
CLAB_API size_t clab_report_check_count(const clab_report* r);
CLAB_API clab_status clab_report_render(const clab_report* r, clab_format format, char** out);
CLAB_API void clab_report_free(clab_report* r);

#ifdef __cplusplus
}
#endif

#endif /* COLLATZLAB_H */
