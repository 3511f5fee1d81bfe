#ifndef COMMENTBENCH_H
#define COMMENTBENCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CbStatus {
  CB_STATUS_OK = 0,
  CB_STATUS_NULL_POINTER = 1,
  CB_STATUS_INVALID_UTF8 = 2,
  CB_STATUS_INVALID_ARGUMENT = 3,
  CB_STATUS_IO = 4,
  CB_STATUS_DATA = 5,
  CB_STATUS_PANIC = 6,
} CbStatus;

/**
 * Opaque BM25 index.
 */
typedef struct CbIndex CbIndex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *cb_last_error_message(void);

/**
 * Scores `n` candidate lines against one reference line each under
 * `variant` (e.g. "M2", "Moses"). Writes the 0–100 score to `out`.
 *
 * # Safety
 * `candidates` and `references` must point to `n` valid C strings; `out`
 * must be writable.
 */
enum CbStatus cb_bleu(const char *variant,
                      const char *const *candidates,
                      const char *const *references,
                      size_t n,
                      double *out);

/**
 * Spearman's rho and two-sided p-value. Both are NaN when either input is
 * constant.
 *
 * # Safety
 * `xs` and `ys` must point to `n` doubles; `rho` and `p` must be writable.
 */
enum CbStatus cb_spearman(const double *xs, const double *ys, size_t n, double *rho, double *p);

/**
 * Benjamini-Hochberg adjusted p-values, in input order.
 *
 * # Safety
 * `pvals` and `out` must point to `n` doubles.
 */
enum CbStatus cb_bh_adjust(const double *pvals, size_t n, double *out);

/**
 * Builds an index over `n` code/comment pairs. Free it with
 * [`cb_index_free`].
 *
 * # Safety
 * `sources` and `comments` must point to `n` valid C strings; `out` must be
 * writable.
 */
enum CbStatus cb_index_build(const char *const *sources,
                             const char *const *comments,
                             size_t n,
                             struct CbIndex **out);

/**
 * # Safety
 * `path` must be a valid C string; `out` must be writable.
 */
enum CbStatus cb_index_load(const char *path, struct CbIndex **out);

/**
 * # Safety
 * `index` must come from this library; `path` must be a valid C string.
 */
enum CbStatus cb_index_save(const struct CbIndex *index, const char *path);

/**
 * Number of indexed documents, or 0 for a null handle.
 *
 * # Safety
 * `index` must be null or come from this library.
 */
size_t cb_index_len(const struct CbIndex *index);

/**
 * Top `k` documents for `code` under k1 = 1.2, b = 0.75. Fills up to `k`
 * entries of `docs` and `scores` and writes the count to `n_hits`; zero hits
 * means no document shares a term with the query.
 *
 * # Safety
 * `index` must come from this library; `docs` and `scores` must hold `k`
 * entries; `n_hits` must be writable.
 */
enum CbStatus cb_index_retrieve(const struct CbIndex *index,
                                const char *code,
                                size_t k,
                                size_t *docs,
                                double *scores,
                                size_t *n_hits);

/**
 * The stored comment of `doc`, space-joined. Release with
 * [`cb_string_free`].
 *
 * # Safety
 * `index` must come from this library; `out` must be writable.
 */
enum CbStatus cb_index_comment(const struct CbIndex *index, size_t doc, char **out);

/**
 * # Safety
 * `index` must be null or come from this library and not be freed twice.
 */
void cb_index_free(struct CbIndex *index);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void cb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMMENTBENCH_H */
