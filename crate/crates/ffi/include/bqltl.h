#ifndef BQLTL_H
#define BQLTL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BqltlCode {
  BQLTL_CODE_OK = 0,
  BQLTL_CODE_NULL_ARGUMENT = 1,
  BQLTL_CODE_INVALID_UTF8 = 2,
  BQLTL_CODE_PARSE = 3,
  BQLTL_CODE_RESOURCE = 4,
  BQLTL_CODE_INVALID_INPUT = 5,
  BQLTL_CODE_PANIC = 6,
} BqltlCode;

typedef enum BqltlSemantics {
  BQLTL_SEMANTICS_CLASSIC = 0,
  BQLTL_SEMANTICS_BEHAVIORAL = 1,
  BQLTL_SEMANTICS_WEAK_BEHAVIORAL = 2,
} BqltlSemantics;

typedef enum BqltlStatus {
  BQLTL_STATUS_SAT = 0,
  BQLTL_STATUS_UNSAT = 1,
  BQLTL_STATUS_UNKNOWN = 2,
} BqltlStatus;

typedef struct BqltlFormula BqltlFormula;

typedef struct BqltlVerdict BqltlVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *bqltl_last_error(void);

/**
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum BqltlCode bqltl_formula_parse(const char *text, struct BqltlFormula **out);

/**
 * # Safety
 * `f` must come from `bqltl_formula_parse` or `bqltl_formula_negate` and
 * not be freed already. Null is ignored.
 */
void bqltl_formula_free(struct BqltlFormula *f);

/**
 * The formula in the surface syntax, or null for a null handle.
 *
 * # Safety
 * `f` must be a live formula handle or null.
 */
char *bqltl_formula_to_string(const struct BqltlFormula *f);

/**
 * A new handle for the negation, or null for a null handle.
 *
 * # Safety
 * `f` must be a live formula handle or null.
 */
struct BqltlFormula *bqltl_formula_negate(const struct BqltlFormula *f);

/**
 * Decides `f`. A zero `state_cap` or `timeout_ms` keeps the default.
 *
 * # Safety
 * `f` must be a live formula handle and `out` writable.
 */
enum BqltlCode bqltl_solve(const struct BqltlFormula *f,
                           enum BqltlSemantics sem,
                           uint64_t state_cap,
                           uint64_t timeout_ms,
                           struct BqltlVerdict **out);

/**
 * # Safety
 * `v` must come from `bqltl_solve` and not be freed already. Null is
 * ignored.
 */
void bqltl_verdict_free(struct BqltlVerdict *v);

/**
 * Unknown for a null handle.
 *
 * # Safety
 * `v` must be a live verdict handle or null.
 */
enum BqltlStatus bqltl_verdict_status(const struct BqltlVerdict *v);

/**
 * The full report as JSON, without timings.
 *
 * # Safety
 * `v` must be a live verdict handle or null.
 */
char *bqltl_verdict_json(const struct BqltlVerdict *v);

/**
 * The witness as JSON, or null when there is none.
 *
 * # Safety
 * `v` must be a live verdict handle or null.
 */
char *bqltl_verdict_witness_json(const struct BqltlVerdict *v);

/**
 * Checks a witness in the JSON form produced above against `f`.
 *
 * # Safety
 * `f` must be a live formula handle, `witness` a nul-terminated string and
 * `valid` writable.
 */
enum BqltlCode bqltl_validate(const struct BqltlFormula *f,
                              enum BqltlSemantics sem,
                              const char *witness,
                              bool *valid);

/**
 * # Safety
 * `s` must come from this library and not be freed already. Null is
 * ignored.
 */
void bqltl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BQLTL_H */
