#ifndef RFUZZY_H
#define RFUZZY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RfzFormat {
  /**
   * One answer per line, `no` when empty.
   */
  RFZ_FORMAT_PLAIN = 0,
  /**
   * A single JSON array.
   */
  RFZ_FORMAT_JSON = 1,
} RfzFormat;

/**
 * Result of every fallible call. The first four values match the exit
 * codes of the `rfz` command.
 */
typedef enum RfzStatus {
  RFZ_STATUS_OK = 0,
  /**
   * The query was valid but produced no answers.
   */
  RFZ_STATUS_NO_ANSWER = 1,
  /**
   * The program or query was rejected.
   */
  RFZ_STATUS_COMPILE_ERROR = 2,
  /**
   * Evaluation hit the depth limit or a recursive loop.
   */
  RFZ_STATUS_RESOURCE_ERROR = 3,
  /**
   * A required pointer was null, a string was not UTF-8, or an index
   * was out of range.
   */
  RFZ_STATUS_INVALID_ARGUMENT = 4,
  /**
   * An internal error was caught at the boundary.
   */
  RFZ_STATUS_PANIC = 5,
} RfzStatus;

/**
 * The answers to one query.
 */
typedef struct RfzAnswers RfzAnswers;

/**
 * A loaded, validated program.
 */
typedef struct RfzProgram RfzProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *rfz_version(void);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on this thread.
 */
const char *rfz_last_error(void);

/**
 * Parses and validates `source`. `origin` names the source in
 * diagnostics and may be null. On success `*out` receives a new program.
 *
 * # Safety
 * `source` and a non-null `origin` must be NUL-terminated strings; `out`
 * must be valid for a pointer write.
 */
enum RfzStatus rfz_program_load(const char *source, const char *origin, struct RfzProgram **out);

/**
 * Sets the maximum nesting of rule evaluations for later queries.
 *
 * # Safety
 * `program` must come from `rfz_program_load` and not yet be freed.
 */
enum RfzStatus rfz_program_set_depth_limit(struct RfzProgram *program, uintptr_t limit);

/**
 * # Safety
 * `program` must be null or come from `rfz_program_load`, and is invalid
 * afterwards.
 */
void rfz_program_free(struct RfzProgram *program);

/**
 * Answers `query`, keeping at most `max_answers` (0 keeps all). On `Ok`
 * or `NoAnswer`, `*out` receives the answer set.
 *
 * # Safety
 * `program` must be live, `query` a NUL-terminated string and `out` valid
 * for a pointer write.
 */
enum RfzStatus rfz_query(const struct RfzProgram *program,
                         const char *query,
                         uintptr_t max_answers,
                         struct RfzAnswers **out);

/**
 * Number of answers; 0 for a null handle.
 *
 * # Safety
 * `answers` must be null or a live answer set.
 */
uintptr_t rfz_answers_len(const struct RfzAnswers *answers);

/**
 * Writes the truth value of answer `index` to `*tv`.
 *
 * # Safety
 * `answers` must be live and `tv` valid for a write.
 */
enum RfzStatus rfz_answer_tv(const struct RfzAnswers *answers, uintptr_t index, double *tv);

/**
 * The tier that produced answer `index`, as a static string such as
 * `"fact"`, or null when out of range.
 *
 * # Safety
 * `answers` must be null or live.
 */
const char *rfz_answer_source(const struct RfzAnswers *answers, uintptr_t index);

/**
 * The value bound to query variable `var` in answer `index`, or null when
 * the variable is not bound. Free with `rfz_string_free`.
 *
 * # Safety
 * `answers` must be live and `var` a NUL-terminated string.
 */
char *rfz_answer_binding(const struct RfzAnswers *answers, uintptr_t index, const char *var);

/**
 * Renders the answer set as the `rfz` command would print it. Free with
 * `rfz_string_free`.
 *
 * # Safety
 * `answers` must be live.
 */
char *rfz_answers_format(const struct RfzAnswers *answers, enum RfzFormat format);

/**
 * # Safety
 * `answers` must be null or come from `rfz_query`, and is invalid
 * afterwards.
 */
void rfz_answers_free(struct RfzAnswers *answers);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void rfz_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RFUZZY_H */
