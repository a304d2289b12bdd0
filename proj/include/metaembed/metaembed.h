// Copyright 2026 The metaembed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the metaembed toolkit.
 *
 * Every object is an opaque handle created by a create, load, build or
 * train call and released with the matching _free function. Functions that can
 * fail return me_status; on failure the message of the last error on the
 * calling thread is available from me_last_error(). Strings returned by
 * accessors are owned by the handle and stay valid until it is freed.
 */
#ifndef METAEMBED_METAEMBED_H_
#define METAEMBED_METAEMBED_H_

#include <stddef.h>
#include <stdint.h>

#if defined(METAEMBED_BUILDING_LIBRARY)
#define ME_API __attribute__((visibility("default")))
#else
#define ME_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum me_status {
  ME_OK = 0,
  ME_ERR_INVALID_ARGUMENT = 1,
  ME_ERR_IO = 2,
  ME_ERR_FORMAT = 3,
  ME_ERR_ENCODING = 4,
  ME_ERR_EMPTY_VOCABULARY = 5,
  ME_ERR_EMPTY_INPUT = 6,
  ME_ERR_DOMAIN = 7,
  ME_ERR_NUMERIC = 8,
  ME_ERR_DEGENERATE_SAMPLE = 9,
  ME_ERR_INTERNAL = 100
} me_status;

typedef enum me_weighting { ME_WEIGHTING_FLAT = 0, ME_WEIGHTING_INVERSE_DISTANCE = 1 } me_weighting;
typedef enum me_aggregation { ME_AGGREGATE_MEAN = 0, ME_AGGREGATE_SUM = 1 } me_aggregation;
typedef enum me_label { ME_LABEL_LITERAL = 0, ME_LABEL_METAPHOR = 1 } me_label;

ME_API const char* me_version(void);
ME_API const char* me_status_string(me_status status);
/* Message of the most recent failure on this thread; "" if none. */
ME_API const char* me_last_error(void);

/* ---- tokens ------------------------------------------------------------ */

typedef struct me_tokens me_tokens;

ME_API me_status me_tokenize(const char* utf8, size_t length, me_tokens** out);
ME_API size_t me_tokens_count(const me_tokens* tokens);
ME_API const char* me_tokens_get(const me_tokens* tokens, size_t index);
ME_API void me_tokens_free(me_tokens* tokens);

/* ---- corpus and vocabulary --------------------------------------------- */

/* A raw UTF-8 corpus, tokenized, one segment per non-blank line. */
typedef struct me_corpus me_corpus;

ME_API me_status me_corpus_load(const char* path, me_corpus** out);
ME_API size_t me_corpus_segments(const me_corpus* corpus);
ME_API uint64_t me_corpus_tokens(const me_corpus* corpus);
ME_API void me_corpus_free(me_corpus* corpus);

typedef struct me_vocab me_vocab;

ME_API me_status me_vocab_build(const me_corpus* corpus, uint64_t min_count,
                                unsigned threads, me_vocab** out);
ME_API me_status me_vocab_load(const char* path, me_vocab** out);
ME_API me_status me_vocab_save(const me_vocab* vocab, const char* path);
ME_API size_t me_vocab_size(const me_vocab* vocab);
/* NULL when id is out of range. */
ME_API const char* me_vocab_word(const me_vocab* vocab, size_t id);
ME_API uint64_t me_vocab_freq(const me_vocab* vocab, size_t id);
/* Id of `word`, or -1 when absent. */
ME_API int64_t me_vocab_find(const me_vocab* vocab, const char* word);
ME_API void me_vocab_free(me_vocab* vocab);

/* ---- labeled phrases --------------------------------------------------- */

typedef struct me_phrases me_phrases;

ME_API me_status me_phrases_load(const char* path, me_phrases** out);
ME_API size_t me_phrases_count(const me_phrases* phrases);
ME_API size_t me_phrases_count_label(const me_phrases* phrases, me_label label);
ME_API me_label me_phrases_label(const me_phrases* phrases, size_t index);
ME_API const char* me_phrases_verb(const me_phrases* phrases, size_t index);
ME_API void me_phrases_free(me_phrases* phrases);

/* ---- co-occurrence ----------------------------------------------------- */

typedef struct me_cooccur me_cooccur;

ME_API me_status me_cooccur_build(const me_corpus* corpus, const me_vocab* vocab,
                                  uint32_t window, me_weighting weighting,
                                  unsigned threads, me_cooccur** out);
ME_API me_status me_cooccur_load(const char* path, me_cooccur** out);
ME_API me_status me_cooccur_save(const me_cooccur* table, const char* path);
ME_API size_t me_cooccur_entries(const me_cooccur* table);
/* X_ij, 0 when the pair is absent. */
ME_API double me_cooccur_get(const me_cooccur* table, uint32_t i, uint32_t j);
ME_API void me_cooccur_free(me_cooccur* table);

/* ---- embeddings -------------------------------------------------------- */

typedef struct me_embeddings me_embeddings;

typedef struct me_cbow_config {
  size_t dim;
  uint32_t radius;
  double lr;
  uint32_t epochs;
  uint32_t negatives; /* 0 = exact softmax */
  uint64_t seed;
  unsigned threads;
} me_cbow_config;

typedef struct me_glove_config {
  size_t dim;
  double lr;
  uint32_t epochs;
  double alpha_exp;
  double x_max;
  uint64_t seed;
  unsigned threads;
} me_glove_config;

ME_API void me_cbow_config_default(me_cbow_config* config);
ME_API void me_glove_config_default(me_glove_config* config);

ME_API me_status me_train_cbow(const me_corpus* corpus, const me_vocab* vocab,
                               const me_cbow_config* config, me_embeddings** out);
ME_API me_status me_train_glove(const me_cooccur* table, const me_vocab* vocab,
                                const me_glove_config* config, me_embeddings** out);
ME_API me_status me_embeddings_load(const char* path, me_embeddings** out);
ME_API me_status me_embeddings_save(const me_embeddings* emb, const char* path);
ME_API size_t me_embeddings_size(const me_embeddings* emb);
ME_API size_t me_embeddings_dim(const me_embeddings* emb);
/* Copies the vector of `word` into out[0..dim); ME_ERR_INVALID_ARGUMENT if
 * the word is unknown. */
ME_API me_status me_embeddings_vector(const me_embeddings* emb, const char* word,
                                      double* out, size_t capacity);
/* Per-epoch training losses; 0 epochs for loaded embeddings. */
ME_API size_t me_embeddings_epochs(const me_embeddings* emb);
ME_API double me_embeddings_epoch_loss(const me_embeddings* emb, size_t epoch);
ME_API void me_embeddings_free(me_embeddings* emb);

/* ---- sentence vectors -------------------------------------------------- */

typedef struct me_sentvecs me_sentvecs;

ME_API me_status me_sentvecs_embed(const me_phrases* phrases, const me_embeddings* emb,
                                   me_aggregation mode, me_sentvecs** out);
ME_API me_status me_sentvecs_load(const char* path, me_sentvecs** out);
ME_API me_status me_sentvecs_save(const me_sentvecs* vecs, const char* path);
ME_API size_t me_sentvecs_count(const me_sentvecs* vecs);
ME_API size_t me_sentvecs_dim(const me_sentvecs* vecs);
ME_API size_t me_sentvecs_count_label(const me_sentvecs* vecs, me_label label);
/* Phrases dropped because no token had an embedding (0 after load). */
ME_API size_t me_sentvecs_excluded(const me_sentvecs* vecs);
ME_API size_t me_sentvecs_excluded_index(const me_sentvecs* vecs, size_t k);
ME_API double me_sentvecs_mean_coverage(const me_sentvecs* vecs);
ME_API void me_sentvecs_free(me_sentvecs* vecs);

/* ---- statistics -------------------------------------------------------- */

typedef struct me_ttest_result {
  int64_t dimension; /* -1 for the norm test */
  double t;
  double df;
  double p;
  int significant;
} me_ttest_result;

ME_API me_status me_welch_t(const double* a, size_t na, const double* b, size_t nb,
                            double alpha, me_ttest_result* out);

typedef struct me_ttest_report me_ttest_report;

ME_API me_status me_ttest_groups(const me_sentvecs* vecs, double alpha, me_ttest_report** out);
ME_API me_status me_ttest_report_save(const me_ttest_report* report, const char* path);
ME_API size_t me_ttest_report_dimensions(const me_ttest_report* report);
ME_API size_t me_ttest_report_significant(const me_ttest_report* report);
ME_API me_ttest_result me_ttest_report_get(const me_ttest_report* report, size_t dimension);
ME_API me_ttest_result me_ttest_report_norm(const me_ttest_report* report);
ME_API void me_ttest_report_free(me_ttest_report* report);

/* ---- classifier -------------------------------------------------------- */

typedef struct me_svm_config {
  double lambda;
  uint32_t epochs;
  uint64_t seed;
} me_svm_config;

typedef struct me_cv_config {
  uint32_t folds;
  int stratified;
  uint64_t seed;
  me_svm_config svm;
  unsigned threads;
} me_cv_config;

typedef struct me_fold_metrics {
  size_t tp, fp, tn, fn;
  double accuracy;
  double precision;      /* NaN when undefined */
  int precision_defined;
} me_fold_metrics;

ME_API void me_cv_config_default(me_cv_config* config);

typedef struct me_svm me_svm;

ME_API me_status me_svm_train(const me_sentvecs* vecs, const me_svm_config* config,
                              me_svm** out);
ME_API me_status me_svm_load(const char* path, me_svm** out);
ME_API me_status me_svm_save(const me_svm* model, const char* path);
ME_API size_t me_svm_dim(const me_svm* model);
ME_API me_status me_svm_predict(const me_svm* model, const double* x, size_t dim,
                                me_label* label, double* margin);
ME_API void me_svm_free(me_svm* model);

typedef struct me_eval_report me_eval_report;

ME_API me_status me_cross_validate(const me_sentvecs* vecs, const me_cv_config* config,
                                   me_eval_report** out);
ME_API me_status me_eval_report_save(const me_eval_report* report, const char* path);
ME_API size_t me_eval_report_folds(const me_eval_report* report);
ME_API me_fold_metrics me_eval_report_fold(const me_eval_report* report, size_t fold);
ME_API double me_eval_report_mean_accuracy(const me_eval_report* report);
/* NaN when no fold has a defined precision. */
ME_API double me_eval_report_mean_precision(const me_eval_report* report);
ME_API void me_eval_report_free(me_eval_report* report);

#ifdef __cplusplus
}
#endif

#endif /* METAEMBED_METAEMBED_H_ */
