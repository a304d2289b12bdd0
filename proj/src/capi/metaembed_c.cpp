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

#include "metaembed/metaembed.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "metaembed/cbow.hpp"
#include "metaembed/classifier.hpp"
#include "metaembed/cooccur.hpp"
#include "metaembed/corpus.hpp"
#include "metaembed/embeddings.hpp"
#include "metaembed/error.hpp"
#include "metaembed/glove.hpp"
#include "metaembed/sentvec.hpp"
#include "metaembed/stats.hpp"

using namespace metaembed;

struct me_tokens {
  std::vector<Token> tokens;
};
struct me_corpus {
  std::vector<Segment> segments;
};
struct me_vocab {
  Vocabulary vocab;
};
struct me_phrases {
  std::vector<LabeledPhrase> phrases;
};
struct me_cooccur {
  CooccurrenceTable table;
};
struct me_embeddings {
  EmbeddingMatrix matrix;
  std::vector<double> epoch_losses;
};
struct me_sentvecs {
  std::vector<SentenceVector> vectors;
  CoverageReport report;
};
struct me_ttest_report {
  GroupTestReport report;
};
struct me_svm {
  SvmModel model;
};
struct me_eval_report {
  EvalReport report;
};

namespace {

thread_local std::string last_error;

me_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return ME_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return ME_ERR_IO;
    case ErrorCode::kFormat: return ME_ERR_FORMAT;
    case ErrorCode::kEncoding: return ME_ERR_ENCODING;
    case ErrorCode::kEmptyVocabulary: return ME_ERR_EMPTY_VOCABULARY;
    case ErrorCode::kEmptyInput: return ME_ERR_EMPTY_INPUT;
    case ErrorCode::kDomain: return ME_ERR_DOMAIN;
    case ErrorCode::kNumeric: return ME_ERR_NUMERIC;
    case ErrorCode::kDegenerateSample: return ME_ERR_DEGENERATE_SAMPLE;
  }
  return ME_ERR_INTERNAL;
}

me_status fail(me_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class Fn>
me_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return ME_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ME_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ME_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ME_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, message);
}

// Allocates the handle only after `make` succeeded so failures leak nothing.
template <class Handle, class Make>
me_status create(Handle** out, Make&& make) {
  if (out == nullptr) return fail(ME_ERR_INVALID_ARGUMENT, "null output handle");
  *out = nullptr;
  return guarded([&] { *out = new Handle(make()); });
}

me_ttest_result to_c(const TTestResult& r) {
  me_ttest_result c;
  c.dimension = r.dimension ? static_cast<int64_t>(*r.dimension) : -1;
  c.t = r.t_statistic;
  c.df = r.degrees_of_freedom;
  c.p = r.p_value;
  c.significant = r.significant ? 1 : 0;
  return c;
}

SvmConfig to_cpp(const me_svm_config& c) {
  SvmConfig s;
  s.lambda = c.lambda;
  s.epochs = c.epochs;
  s.seed = c.seed;
  return s;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* me_version(void) { return "0.1.0"; }

const char* me_status_string(me_status status) {
  switch (status) {
    case ME_OK: return "ok";
    case ME_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ME_ERR_IO: return "i/o error";
    case ME_ERR_FORMAT: return "format error";
    case ME_ERR_ENCODING: return "encoding error";
    case ME_ERR_EMPTY_VOCABULARY: return "empty vocabulary";
    case ME_ERR_EMPTY_INPUT: return "empty input";
    case ME_ERR_DOMAIN: return "domain error";
    case ME_ERR_NUMERIC: return "numeric error";
    case ME_ERR_DEGENERATE_SAMPLE: return "degenerate sample";
    case ME_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* me_last_error(void) { return last_error.c_str(); }

// ---- tokens

me_status me_tokenize(const char* utf8, size_t length, me_tokens** out) {
  return create(out, [&] {
    require(utf8 != nullptr || length == 0, "null text");
    return me_tokens{tokenize(std::string_view(utf8 ? utf8 : "", length))};
  });
}

size_t me_tokens_count(const me_tokens* tokens) { return tokens ? tokens->tokens.size() : 0; }

const char* me_tokens_get(const me_tokens* tokens, size_t index) {
  if (!tokens || index >= tokens->tokens.size()) return nullptr;
  return tokens->tokens[index].c_str();
}

void me_tokens_free(me_tokens* tokens) { delete tokens; }

// ---- corpus and vocabulary

me_status me_corpus_load(const char* path, me_corpus** out) {
  return create(out, [&] {
    require(path != nullptr, "null path");
    return me_corpus{load_corpus(path)};
  });
}

size_t me_corpus_segments(const me_corpus* corpus) {
  return corpus ? corpus->segments.size() : 0;
}

uint64_t me_corpus_tokens(const me_corpus* corpus) {
  uint64_t n = 0;
  if (corpus) {
    for (const Segment& s : corpus->segments) n += s.size();
  }
  return n;
}

void me_corpus_free(me_corpus* corpus) { delete corpus; }

me_status me_vocab_build(const me_corpus* corpus, uint64_t min_count, unsigned threads,
                         me_vocab** out) {
  return create(out, [&] {
    require(corpus != nullptr, "null corpus");
    return me_vocab{Vocabulary::build(count_tokens(corpus->segments, threads), min_count)};
  });
}

me_status me_vocab_load(const char* path, me_vocab** out) {
  return create(out, [&] {
    require(path != nullptr, "null path");
    return me_vocab{Vocabulary::load(path)};
  });
}

me_status me_vocab_save(const me_vocab* vocab, const char* path) {
  return guarded([&] {
    require(vocab != nullptr && path != nullptr, "null argument");
    vocab->vocab.save(path);
  });
}

size_t me_vocab_size(const me_vocab* vocab) { return vocab ? vocab->vocab.size() : 0; }

const char* me_vocab_word(const me_vocab* vocab, size_t id) {
  if (!vocab || id >= vocab->vocab.size()) return nullptr;
  return vocab->vocab.word(static_cast<WordId>(id)).c_str();
}

uint64_t me_vocab_freq(const me_vocab* vocab, size_t id) {
  if (!vocab || id >= vocab->vocab.size()) return 0;
  return vocab->vocab.freq(static_cast<WordId>(id));
}

int64_t me_vocab_find(const me_vocab* vocab, const char* word) {
  if (!vocab || !word) return -1;
  auto id = vocab->vocab.find(word);
  return id ? static_cast<int64_t>(*id) : -1;
}

void me_vocab_free(me_vocab* vocab) { delete vocab; }

// ---- labeled phrases

me_status me_phrases_load(const char* path, me_phrases** out) {
  return create(out, [&] {
    require(path != nullptr, "null path");
    return me_phrases{load_labeled_phrases(path)};
  });
}

size_t me_phrases_count(const me_phrases* phrases) {
  return phrases ? phrases->phrases.size() : 0;
}

size_t me_phrases_count_label(const me_phrases* phrases, me_label label) {
  if (!phrases) return 0;
  const LabelCounts counts = count_labels(phrases->phrases);
  return label == ME_LABEL_METAPHOR ? counts.metaphor : counts.literal;
}

me_label me_phrases_label(const me_phrases* phrases, size_t index) {
  if (!phrases || index >= phrases->phrases.size()) return ME_LABEL_LITERAL;
  return phrases->phrases[index].label == Label::kMetaphor ? ME_LABEL_METAPHOR
                                                           : ME_LABEL_LITERAL;
}

const char* me_phrases_verb(const me_phrases* phrases, size_t index) {
  if (!phrases || index >= phrases->phrases.size()) return nullptr;
  return phrases->phrases[index].verb.c_str();
}

void me_phrases_free(me_phrases* phrases) { delete phrases; }

// ---- co-occurrence

me_status me_cooccur_build(const me_corpus* corpus, const me_vocab* vocab, uint32_t window,
                           me_weighting weighting, unsigned threads, me_cooccur** out) {
  return create(out, [&] {
    require(corpus != nullptr && vocab != nullptr, "null argument");
    CooccurrenceOptions options;
    options.window = window;
    options.weighting =
        weighting == ME_WEIGHTING_FLAT ? Weighting::kFlat : Weighting::kInverseDistance;
    options.threads = threads;
    const auto ids = vocab->vocab.encode(corpus->segments);
    return me_cooccur{build_cooccurrence(ids, vocab->vocab.size(), options)};
  });
}

me_status me_cooccur_load(const char* path, me_cooccur** out) {
  return create(out, [&] {
    require(path != nullptr, "null path");
    return me_cooccur{CooccurrenceTable::load(path)};
  });
}

me_status me_cooccur_save(const me_cooccur* table, const char* path) {
  return guarded([&] {
    require(table != nullptr && path != nullptr, "null argument");
    table->table.save(path);
  });
}

size_t me_cooccur_entries(const me_cooccur* table) { return table ? table->table.size() : 0; }

double me_cooccur_get(const me_cooccur* table, uint32_t i, uint32_t j) {
  return table ? table->table.at(i, j) : 0.0;
}

void me_cooccur_free(me_cooccur* table) { delete table; }

// ---- embeddings

void me_cbow_config_default(me_cbow_config* config) {
  if (!config) return;
  const CbowConfig d;
  config->dim = d.dim;
  config->radius = d.radius;
  config->lr = d.lr0;
  config->epochs = d.epochs;
  config->negatives = d.negatives;
  config->seed = d.seed;
  config->threads = d.threads;
}

void me_glove_config_default(me_glove_config* config) {
  if (!config) return;
  const GloveConfig d;
  config->dim = d.dim;
  config->lr = d.lr0;
  config->epochs = d.epochs;
  config->alpha_exp = d.params.alpha;
  config->x_max = d.params.x_max;
  config->seed = d.seed;
  config->threads = d.threads;
}

me_status me_train_cbow(const me_corpus* corpus, const me_vocab* vocab,
                        const me_cbow_config* config, me_embeddings** out) {
  return create(out, [&] {
    require(corpus != nullptr && vocab != nullptr && config != nullptr, "null argument");
    CbowConfig c;
    c.dim = config->dim;
    c.radius = config->radius;
    c.lr0 = config->lr;
    c.epochs = config->epochs;
    c.negatives = config->negatives;
    c.seed = config->seed;
    c.threads = config->threads;
    const auto ids = vocab->vocab.encode(corpus->segments);
    TrainingResult r = train_cbow(ids, vocab->vocab, c);
    return me_embeddings{std::move(r.embeddings), std::move(r.epoch_losses)};
  });
}

me_status me_train_glove(const me_cooccur* table, const me_vocab* vocab,
                         const me_glove_config* config, me_embeddings** out) {
  return create(out, [&] {
    require(table != nullptr && vocab != nullptr && config != nullptr, "null argument");
    GloveConfig c;
    c.dim = config->dim;
    c.lr0 = config->lr;
    c.epochs = config->epochs;
    c.params.alpha = config->alpha_exp;
    c.params.x_max = config->x_max;
    c.seed = config->seed;
    c.threads = config->threads;
    TrainingResult r = train_glove(table->table, vocab->vocab, c);
    return me_embeddings{std::move(r.embeddings), std::move(r.epoch_losses)};
  });
}

me_status me_embeddings_load(const char* path, me_embeddings** out) {
  return create(out, [&] {
    require(path != nullptr, "null path");
    return me_embeddings{EmbeddingMatrix::load(path), {}};
  });
}

me_status me_embeddings_save(const me_embeddings* emb, const char* path) {
  return guarded([&] {
    require(emb != nullptr && path != nullptr, "null argument");
    emb->matrix.save(path);
  });
}

size_t me_embeddings_size(const me_embeddings* emb) { return emb ? emb->matrix.size() : 0; }
size_t me_embeddings_dim(const me_embeddings* emb) { return emb ? emb->matrix.dim() : 0; }

me_status me_embeddings_vector(const me_embeddings* emb, const char* word, double* out,
                               size_t capacity) {
  return guarded([&] {
    require(emb != nullptr && word != nullptr && out != nullptr, "null argument");
    require(capacity >= emb->matrix.dim(), "output buffer smaller than the dimension");
    const auto row = emb->matrix.find(word);
    if (!row) throw Error(ErrorCode::kInvalidArgument, std::string("unknown word '") + word + "'");
    const auto v = emb->matrix.vector(*row);
    std::copy(v.begin(), v.end(), out);
  });
}

size_t me_embeddings_epochs(const me_embeddings* emb) {
  return emb ? emb->epoch_losses.size() : 0;
}

double me_embeddings_epoch_loss(const me_embeddings* emb, size_t epoch) {
  if (!emb || epoch >= emb->epoch_losses.size()) return kNaN;
  return emb->epoch_losses[epoch];
}

void me_embeddings_free(me_embeddings* emb) { delete emb; }

// ---- sentence vectors

me_status me_sentvecs_embed(const me_phrases* phrases, const me_embeddings* emb,
                            me_aggregation mode, me_sentvecs** out) {
  return create(out, [&] {
    require(phrases != nullptr && emb != nullptr, "null argument");
    EmbeddedDataset data = embed_dataset(
        phrases->phrases, emb->matrix,
        mode == ME_AGGREGATE_SUM ? Aggregation::kSum : Aggregation::kMean);
    return me_sentvecs{std::move(data.vectors), std::move(data.report)};
  });
}

me_status me_sentvecs_load(const char* path, me_sentvecs** out) {
  return create(out, [&] {
    require(path != nullptr, "null path");
    me_sentvecs v{load_sentence_vectors(path), {}};
    double coverage = 0.0;
    for (const SentenceVector& s : v.vectors) {
      (s.label == Label::kMetaphor ? v.report.metaphor : v.report.literal)++;
      coverage += static_cast<double>(s.covered) / static_cast<double>(s.total);
    }
    if (!v.vectors.empty()) {
      v.report.mean_coverage = coverage / static_cast<double>(v.vectors.size());
    }
    return v;
  });
}

me_status me_sentvecs_save(const me_sentvecs* vecs, const char* path) {
  return guarded([&] {
    require(vecs != nullptr && path != nullptr, "null argument");
    save_sentence_vectors(path, vecs->vectors);
  });
}

size_t me_sentvecs_count(const me_sentvecs* vecs) { return vecs ? vecs->vectors.size() : 0; }

size_t me_sentvecs_dim(const me_sentvecs* vecs) {
  return vecs && !vecs->vectors.empty() ? vecs->vectors.front().values.size() : 0;
}

size_t me_sentvecs_count_label(const me_sentvecs* vecs, me_label label) {
  if (!vecs) return 0;
  return label == ME_LABEL_METAPHOR ? vecs->report.metaphor : vecs->report.literal;
}

size_t me_sentvecs_excluded(const me_sentvecs* vecs) {
  return vecs ? vecs->report.excluded.size() : 0;
}

size_t me_sentvecs_excluded_index(const me_sentvecs* vecs, size_t k) {
  if (!vecs || k >= vecs->report.excluded.size()) return SIZE_MAX;
  return vecs->report.excluded[k];
}

double me_sentvecs_mean_coverage(const me_sentvecs* vecs) {
  return vecs ? vecs->report.mean_coverage : kNaN;
}

void me_sentvecs_free(me_sentvecs* vecs) { delete vecs; }

// ---- statistics

me_status me_welch_t(const double* a, size_t na, const double* b, size_t nb, double alpha,
                     me_ttest_result* out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    *out = to_c(welch_t(std::span<const double>(a, na), std::span<const double>(b, nb), alpha));
  });
}

me_status me_ttest_groups(const me_sentvecs* vecs, double alpha, me_ttest_report** out) {
  return create(out, [&] {
    require(vecs != nullptr, "null argument");
    return me_ttest_report{group_ttest(vecs->vectors, alpha)};
  });
}

me_status me_ttest_report_save(const me_ttest_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr && path != nullptr, "null argument");
    save_ttest_report(path, report->report);
  });
}

size_t me_ttest_report_dimensions(const me_ttest_report* report) {
  return report ? report->report.dimensions.size() : 0;
}

size_t me_ttest_report_significant(const me_ttest_report* report) {
  return report ? report->report.significant_dimensions : 0;
}

me_ttest_result me_ttest_report_get(const me_ttest_report* report, size_t dimension) {
  if (!report || dimension >= report->report.dimensions.size()) {
    return me_ttest_result{-1, kNaN, kNaN, kNaN, 0};
  }
  return to_c(report->report.dimensions[dimension]);
}

me_ttest_result me_ttest_report_norm(const me_ttest_report* report) {
  if (!report) return me_ttest_result{-1, kNaN, kNaN, kNaN, 0};
  return to_c(report->report.norm);
}

void me_ttest_report_free(me_ttest_report* report) { delete report; }

// ---- classifier

void me_cv_config_default(me_cv_config* config) {
  if (!config) return;
  const CvConfig d;
  config->folds = d.folds;
  config->stratified = d.stratified ? 1 : 0;
  config->seed = d.seed;
  config->svm.lambda = d.svm.lambda;
  config->svm.epochs = d.svm.epochs;
  config->svm.seed = d.svm.seed;
  config->threads = d.threads;
}

me_status me_svm_train(const me_sentvecs* vecs, const me_svm_config* config, me_svm** out) {
  return create(out, [&] {
    require(vecs != nullptr && config != nullptr, "null argument");
    return me_svm{train_svm(vecs->vectors, to_cpp(*config))};
  });
}

me_status me_svm_load(const char* path, me_svm** out) {
  return create(out, [&] {
    require(path != nullptr, "null path");
    return me_svm{SvmModel::load(path)};
  });
}

me_status me_svm_save(const me_svm* model, const char* path) {
  return guarded([&] {
    require(model != nullptr && path != nullptr, "null argument");
    model->model.save(path);
  });
}

size_t me_svm_dim(const me_svm* model) { return model ? model->model.dim() : 0; }

me_status me_svm_predict(const me_svm* model, const double* x, size_t dim, me_label* label,
                         double* margin) {
  return guarded([&] {
    require(model != nullptr && x != nullptr, "null argument");
    const Prediction p = predict(model->model, std::span<const double>(x, dim));
    if (label) *label = p.label == Label::kMetaphor ? ME_LABEL_METAPHOR : ME_LABEL_LITERAL;
    if (margin) *margin = p.margin;
  });
}

void me_svm_free(me_svm* model) { delete model; }

me_status me_cross_validate(const me_sentvecs* vecs, const me_cv_config* config,
                            me_eval_report** out) {
  return create(out, [&] {
    require(vecs != nullptr && config != nullptr, "null argument");
    CvConfig c;
    c.folds = config->folds;
    c.stratified = config->stratified != 0;
    c.seed = config->seed;
    c.svm = to_cpp(config->svm);
    c.threads = config->threads;
    return me_eval_report{cross_validate(vecs->vectors, c)};
  });
}

me_status me_eval_report_save(const me_eval_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr && path != nullptr, "null argument");
    report->report.save(path);
  });
}

size_t me_eval_report_folds(const me_eval_report* report) {
  return report ? report->report.folds.size() : 0;
}

me_fold_metrics me_eval_report_fold(const me_eval_report* report, size_t fold) {
  me_fold_metrics m{0, 0, 0, 0, kNaN, kNaN, 0};
  if (!report || fold >= report->report.folds.size()) return m;
  const FoldMetrics& f = report->report.folds[fold];
  m.tp = f.tp;
  m.fp = f.fp;
  m.tn = f.tn;
  m.fn = f.fn;
  m.accuracy = f.accuracy();
  if (auto p = f.precision()) {
    m.precision = *p;
    m.precision_defined = 1;
  }
  return m;
}

double me_eval_report_mean_accuracy(const me_eval_report* report) {
  return report ? report->report.mean_accuracy : kNaN;
}

double me_eval_report_mean_precision(const me_eval_report* report) {
  if (!report || report->report.precision_folds == 0) return kNaN;
  return report->report.mean_precision;
}

void me_eval_report_free(me_eval_report* report) { delete report; }

}  // extern "C"
