#ifndef ANXIETY_H
#define ANXIETY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum AxStatus {
  AX_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  AX_STATUS_NULL_POINTER = 1,
  /*
   A string argument was not valid UTF-8.
   */
  AX_STATUS_INVALID_UTF8 = 2,
  /*
   Bad input data: unreadable file, malformed CSV or model, bad label.
   */
  AX_STATUS_INPUT_ERROR = 3,
  /*
   Bad configuration: unknown classifier, out-of-range parameter.
   */
  AX_STATUS_CONFIG_ERROR = 4,
  /*
   Failure while training or predicting, e.g. single-class data.
   */
  AX_STATUS_RUNTIME_ERROR = 5,
  /*
   A Rust panic was caught at the boundary.
   */
  AX_STATUS_PANIC = 6,
} AxStatus;

/*
 Cleaning resources: slang map, stopwords, emoji names and root words.
 */
typedef struct AxLexicons AxLexicons;

/*
 A fitted vectorizer together with its trained classifier.
 */
typedef struct AxPipeline AxPipeline;

/*
 Headline metrics with Positive as the positive class. Precision and
 recall are undefined when their denominator is zero; the `has_*` flags
 say whether the value is meaningful.
 */
typedef struct AxMetrics {
  double accuracy;
  double precision;
  double recall;
  bool has_precision;
  bool has_recall;
} AxMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static string; never free it.
 */
const char *ax_version(void);

/*
 Stable machine-readable code of the last error on this thread, such as
 "bad-label" or "single-class", or null when the last call succeeded.
 The pointer stays valid until the next call into this library.
 */
const char *ax_last_error_code(void);

/*
 Human-readable message of the last error on this thread, or null.
 The pointer stays valid until the next call into this library.
 */
const char *ax_last_error_message(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must be null or a string returned by this library that has not been
 freed yet.
 */
void ax_string_free(char *s);

/*
 Creates a handle to the built-in lexicons.

 # Safety
 `out` must be valid for writes.
 */
enum AxStatus ax_lexicons_builtin(struct AxLexicons **out);

/*
 Loads lexicons from a directory holding slang.tsv, stopwords.txt,
 emoji.tsv and roots.txt.

 # Safety
 `dir` must be a NUL-terminated string and `out` valid for writes.
 */
enum AxStatus ax_lexicons_load(const char *dir, struct AxLexicons **out);

/*
 Releases a lexicon handle. Null is ignored.

 # Safety
 `lex` must be null or a handle from this library that has not been freed.
 */
void ax_lexicons_free(struct AxLexicons *lex);

/*
 Cleans one comment and returns the space-joined tokens in `out`. An
 empty result is a valid output, not an error.

 # Safety
 `lex` must be a live handle, `text` a NUL-terminated string and `out`
 valid for writes.
 */
enum AxStatus ax_preprocess(const struct AxLexicons *lex, const char *text, char **out);

/*
 Trains a pipeline on a CSV file with `text` and `category` columns.

 `classifier` names a classifier kind ("knn", "bernoulli-nb",
 "decision-tree", "svm", "random-forest", "grad-boost") and `features` is
 "counts" or "tfidf". Default hyperparameters are used.

 # Safety
 `lex` must be a live handle, the strings NUL-terminated and `out` valid
 for writes.
 */
enum AxStatus ax_pipeline_train_csv(const struct AxLexicons *lex,
                                    const char *csv_path,
                                    const char *classifier,
                                    const char *features,
                                    uint64_t seed,
                                    struct AxPipeline **out);

/*
 Loads a pipeline saved by [`ax_pipeline_save`] or the `anxiety train`
 command.

 # Safety
 `path` must be a NUL-terminated string and `out` valid for writes.
 */
enum AxStatus ax_pipeline_load(const char *path, struct AxPipeline **out);

/*
 Writes the pipeline as JSON.

 # Safety
 `pipeline` must be a live handle and `path` a NUL-terminated string.
 */
enum AxStatus ax_pipeline_save(const struct AxPipeline *pipeline, const char *path);

/*
 Number of vocabulary terms the pipeline was fitted on, or 0 for null.

 # Safety
 `pipeline` must be null or a live handle.
 */
size_t ax_pipeline_n_features(const struct AxPipeline *pipeline);

/*
 Classifies one comment. `out_positive` receives 1 for Positive (hope)
 and 0 for Negative (anxiety); `out_score` receives the model score.
 Either out-parameter may be null.

 # Safety
 `pipeline` and `lex` must be live handles, `text` a NUL-terminated
 string, and non-null out-parameters valid for writes.
 */
enum AxStatus ax_pipeline_predict(const struct AxPipeline *pipeline,
                                  const struct AxLexicons *lex,
                                  const char *text,
                                  int *out_positive,
                                  double *out_score);

/*
 Classifies `n` comments at once. `out_positive` and `out_score`, when
 non-null, must have room for `n` values.

 # Safety
 `texts` must point to `n` NUL-terminated strings; the handles must be
 live and the non-null output arrays valid for `n` writes.
 */
enum AxStatus ax_pipeline_predict_batch(const struct AxPipeline *pipeline,
                                        const struct AxLexicons *lex,
                                        const char *const *texts,
                                        size_t n,
                                        int *out_positive,
                                        double *out_score);

/*
 Releases a pipeline handle. Null is ignored.

 # Safety
 `pipeline` must be null or a handle from this library that has not been
 freed.
 */
void ax_pipeline_free(struct AxPipeline *pipeline);

/*
 Computes the headline metrics from confusion-matrix counts.
 Fails with a runtime error when all counts are zero.

 # Safety
 `out` must be valid for writes.
 */
enum AxStatus ax_metrics_from_counts(uint64_t tp,
                                     uint64_t fn_,
                                     uint64_t fp,
                                     uint64_t tn,
                                     struct AxMetrics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANXIETY_H */
