#ifndef HOSC_H
#define HOSC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define HOSC_API __attribute__((visibility("default")))
#else
#define HOSC_API
#endif

/* Status codes returned by every fallible call. The message of the most
 * recent failure on the calling thread is available from hosc_last_error. */
typedef enum hosc_status {
    HOSC_OK = 0,
    HOSC_ERR_NULL = 1,
    HOSC_ERR_ARG = 2,
    HOSC_ERR_PARSE = 3,
    HOSC_ERR_TYPE = 4,
    HOSC_ERR_NOT_CR_FREE = 5,
    HOSC_ERR_MISMATCH = 6,
    HOSC_ERR_PRECONDITION = 7,
    HOSC_ERR_ILLEGAL_MOVE = 8,
    HOSC_ERR_INTERNAL = 9
} hosc_status;

typedef enum hosc_model { HOSC_MODEL_HOSC = 0, HOSC_MODEL_GOSC = 1, HOSC_MODEL_HOS = 2, HOSC_MODEL_GOS = 3 } hosc_model;

typedef enum hosc_format { HOSC_FORMAT_TEXT = 0, HOSC_FORMAT_RECORD = 1 } hosc_format;

typedef enum hosc_verdict { HOSC_DISTINCT = 0, HOSC_EQUIVALENT_UP_TO_DEPTH = 1 } hosc_verdict;

typedef enum hosc_observation { HOSC_OBSERVE_TER = 0, HOSC_OBSERVE_ERR = 1 } hosc_observation;

typedef struct hosc_bounds {
    size_t depth;
    size_t fuel;
    long int_lo;
    long int_hi;
    int exhaustive; /* every Γ-assignment instead of the canonical one */
} hosc_bounds;

typedef struct hosc_term hosc_term;         /* a parsed, typechecked term file */
typedef struct hosc_traceset hosc_traceset; /* canonical traces of a term */
typedef struct hosc_session hosc_session;   /* an interactive game against a term */

HOSC_API const char* hosc_version(void);
HOSC_API const char* hosc_last_error(void);
HOSC_API void hosc_string_free(char* s);

HOSC_API void hosc_bounds_default(hosc_bounds* b);
HOSC_API hosc_status hosc_parse_model(const char* text, hosc_model* out);
HOSC_API const char* hosc_model_name(hosc_model m);

/* ---- terms ---- */

HOSC_API hosc_status hosc_term_parse(const char* text, hosc_term** out);
HOSC_API void hosc_term_free(hosc_term* t);
HOSC_API hosc_status hosc_term_show(const hosc_term* t, char** out);
HOSC_API hosc_status hosc_term_type(const hosc_term* t, char** out);
/* Bit i is set when the term typechecks inside model i. */
HOSC_API hosc_status hosc_term_fragments(const hosc_term* t, unsigned* mask);
HOSC_API hosc_status hosc_term_check_report(const hosc_term* t, hosc_format fmt, char** out);

/* ---- trace sets ---- */

HOSC_API hosc_status hosc_traces(const hosc_term* t, hosc_model m, const hosc_bounds* b, hosc_traceset** out);
HOSC_API void hosc_traceset_free(hosc_traceset* s);
HOSC_API size_t hosc_traceset_size(const hosc_traceset* s);
/* The i-th trace in wire format and its terminal status ("open", ...). */
HOSC_API hosc_status hosc_traceset_get(const hosc_traceset* s, size_t i, char** trace, char** status);
HOSC_API hosc_status hosc_traceset_contains(const hosc_traceset* s, const char* trace, int* out);
HOSC_API hosc_status hosc_traceset_report(const hosc_traceset* s, hosc_format fmt, char** out);

/* Runs the term's configuration along a trace and renders each step. */
HOSC_API hosc_status hosc_derivation(const hosc_term* t, hosc_model m, const char* trace, size_t fuel, hosc_format fmt,
                                     char** out, int* ok);

/* ---- traces ---- */

HOSC_API hosc_status hosc_trace_check(const char* trace, const char* predicate, int* holds, int* violation);
HOSC_API hosc_status hosc_trace_dual_with_err(const char* trace, char** out);

/* ---- equivalence ---- */

typedef struct hosc_equiv_result {
    hosc_verdict verdict;
    char* witness_left;  /* a trace of the first term only, or NULL */
    char* witness_right; /* a trace of the second term only, or NULL */
} hosc_equiv_result;

HOSC_API hosc_status hosc_equiv(const hosc_term* a, const hosc_term* b, hosc_model m, const hosc_bounds* bounds,
                                int complete_only, hosc_equiv_result* out);
HOSC_API void hosc_equiv_result_clear(hosc_equiv_result* r);
HOSC_API hosc_status hosc_equiv_report(const hosc_term* a, const hosc_term* b, hosc_model m,
                                       const hosc_bounds* bounds, int complete_only, hosc_format fmt, char** out,
                                       hosc_verdict* verdict);

/* ---- composition with a context bundle ---- */

HOSC_API hosc_status hosc_compose(const hosc_term* t, const char* bundle, hosc_observation kind, size_t fuel,
                                  int audit, hosc_format fmt, char** out, int* observed);

/* ---- synthesis ---- */

/* `answer_type` may be NULL (Unit). On success *bundle holds the context in
 * bundle format and *report the verification report. */
HOSC_API hosc_status hosc_synthesize(const char* trace, hosc_model m, const char* answer_type, size_t fuel,
                                     hosc_format fmt, char** bundle, char** report, int* verified);

/* ---- interactive play ---- */

HOSC_API hosc_status hosc_session_new(const hosc_term* t, hosc_model m, const hosc_bounds* b, hosc_session** out);
HOSC_API void hosc_session_free(hosc_session* s);
/* Lets P run to its next action, if P is to move. */
HOSC_API hosc_status hosc_session_advance(hosc_session* s, char** p_action);
HOSC_API int hosc_session_active(const hosc_session* s);
HOSC_API int hosc_session_finished(const hosc_session* s);
HOSC_API size_t hosc_session_move_count(const hosc_session* s);
/* A legal O-move and the models that permit it after the current trace. */
HOSC_API hosc_status hosc_session_move(const hosc_session* s, size_t i, char** action, char** note);
HOSC_API hosc_status hosc_session_play_index(hosc_session* s, size_t i);
/* Plays an O-action given in wire format; refusals return HOSC_ERR_ILLEGAL_MOVE. */
HOSC_API hosc_status hosc_session_play(hosc_session* s, const char* action);
HOSC_API hosc_status hosc_session_state(const hosc_session* s, char** out);
HOSC_API hosc_status hosc_session_transcript(const hosc_session* s, char** out);

#ifdef __cplusplus
}
#endif

#endif
