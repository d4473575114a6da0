#ifndef TIDYMISS_H
#define TIDYMISS_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TmPlot {
  TM_PLOT_MISS_VAR = 0,
  TM_PLOT_MISS_CASE = 1,
  TM_PLOT_HEATMAP = 2,
  TM_PLOT_UPSET = 3,
} TmPlot;

typedef enum TmStatus {
  TM_STATUS_OK = 0,
  TM_STATUS_NULL_ARGUMENT = 1,
  TM_STATUS_INVALID_UTF8 = 2,
  TM_STATUS_PARSE = 3,
  TM_STATUS_SCHEMA = 4,
  TM_STATUS_UNKNOWN_COLUMN = 5,
  TM_STATUS_NAME_COLLISION = 6,
  TM_STATUS_TYPE = 7,
  TM_STATUS_EMPTY_DOMAIN = 8,
  TM_STATUS_VALIDATION = 9,
  TM_STATUS_SINGULAR = 10,
  TM_STATUS_IO = 11,
  TM_STATUS_PANIC = 12,
} TmStatus;

typedef enum TmSummary {
  TM_SUMMARY_NUMBERS = 0,
  TM_SUMMARY_VARS = 1,
  TM_SUMMARY_CASES = 2,
  TM_SUMMARY_VAR_TABLE = 3,
  TM_SUMMARY_CASE_TABLE = 4,
} TmSummary;

typedef enum TmUnit {
  TM_UNIT_CELL = 0,
  TM_UNIT_CASE = 1,
  TM_UNIT_VAR = 2,
} TmUnit;

// Opaque nabular table handle.
typedef struct TmNabular TmNabular;

// Opaque table handle.
typedef struct TmTable TmTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *tm_version(void);

// Message for the last failed call on this thread, or NULL. Valid until
// the next call into this library on the same thread.
const char *tm_last_error_message(void);

// Free a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void tm_string_free(char *s);

// Parse delimited text. `na_tokens` is a comma-separated token list, or
// NULL for the default (`NA` and the empty string).
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum TmStatus tm_table_read_csv(const uint8_t *data,
                                size_t len,
                                const char *na_tokens,
                                struct TmTable **out);

// # Safety
// `t` must be NULL or a live handle from this library.
void tm_table_free(struct TmTable *t);

// Row count; 0 for NULL.
//
// # Safety
// `t` must be NULL or a live handle.
size_t tm_table_n_rows(const struct TmTable *t);

// Column count; 0 for NULL.
//
// # Safety
// `t` must be NULL or a live handle.
size_t tm_table_n_cols(const struct TmTable *t);

// # Safety
// `t` must be a live handle; `out` must be writable.
enum TmStatus tm_table_to_csv(const struct TmTable *t, char **out);

// # Safety
// `t` must be a live handle; both outputs must be writable.
enum TmStatus tm_count_missing(const struct TmTable *t, size_t *n_miss, size_t *n_complete);

// Missing (or, with `complement`, complete) rate at the given unit, as a
// proportion or a percent.
//
// # Safety
// `t` must be a live handle; `out` must be writable.
enum TmStatus tm_rate_missing(const struct TmTable *t,
                              enum TmUnit unit,
                              bool percent,
                              bool complement,
                              double *out);

// A summary as a JSON document at full precision.
//
// # Safety
// `t` must be a live handle; `out` must be writable.
enum TmStatus tm_summary_json(const struct TmTable *t, enum TmSummary kind, char **out);

// # Safety
// `t` must be a live handle; `out` must be writable.
enum TmStatus tm_nabular(const struct TmTable *t, struct TmNabular **out);

// Parse a nabular table written by [`tm_nabular_to_csv`].
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum TmStatus tm_nabular_read_csv(const uint8_t *data,
                                  size_t len,
                                  const char *na_tokens,
                                  struct TmNabular **out);

// # Safety
// `n` must be NULL or a live handle from this library.
void tm_nabular_free(struct TmNabular *n);

// # Safety
// `n` must be a live handle; `out` must be writable.
enum TmStatus tm_nabular_to_csv(const struct TmNabular *n, char **out);

// Mark rows matching `where_clause` (e.g. `x == -99`) with `NA_<suffix>`
// in `var`'s shadow column. Returns a new handle.
//
// # Safety
// `n` must be a live handle; strings must be NUL-terminated; `out` writable.
enum TmStatus tm_recode_shadow(const struct TmNabular *n,
                               const char *var,
                               const char *where_clause,
                               const char *suffix,
                               struct TmNabular **out);

// Linear-model imputation of the formula's response (`y ~ a + b`); the
// shadow is left untouched. Returns a new handle.
//
// # Safety
// `n` must be a live handle; `formula` NUL-terminated; `out` writable.
enum TmStatus tm_nabular_impute_lm(const struct TmNabular *n,
                                   const char *formula,
                                   struct TmNabular **out);

// Render an overview plot of `t` as SVG.
//
// # Safety
// `t` must be a live handle; `out` must be writable.
enum TmStatus tm_plot_svg(const struct TmTable *t,
                          enum TmPlot kind,
                          double width,
                          double height,
                          char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TIDYMISS_H */
