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

// metaembed: command-line front end over the C interface.
//
//   metaembed vocab       --corpus FILE [--min-count N] --out DIR
//   metaembed cooccur     --corpus FILE [--window C] [--cooccur-weighting W] --out DIR
//   metaembed train-cbow  --corpus FILE [--dim D] [--window M] ... --out DIR
//   metaembed train-glove [--dim D] [--xmax X] [--alpha-exp A] ... --out DIR
//   metaembed embed       --labeled FILE [--model M] [--aggregate mean|sum] --out DIR
//   metaembed ttest       [--model M] --out DIR
//   metaembed cv          [--model M] [--folds K] --out DIR
//   metaembed pipeline    --corpus FILE --labeled FILE [--model M] ... --out DIR
//
// Artifacts live in the output directory under fixed names, so the steps
// chain. Each run prints one JSON summary line on stdout; diagnostics go to
// stderr.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "metaembed/metaembed.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Thrown after a failed C call; carries the status for the exit message.
struct CallError : std::runtime_error {
  CallError(me_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  me_status status;
};

void check(me_status status, const char* step) {
  if (status != ME_OK) {
    throw CallError(status, std::string(step) + ": " + me_status_string(status) + ": " +
                                me_last_error());
  }
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Corpus = Handle<me_corpus, me_corpus_free>;
using Vocab = Handle<me_vocab, me_vocab_free>;
using Cooccur = Handle<me_cooccur, me_cooccur_free>;
using Embeddings = Handle<me_embeddings, me_embeddings_free>;
using Phrases = Handle<me_phrases, me_phrases_free>;
using SentVecs = Handle<me_sentvecs, me_sentvecs_free>;
using TTestReport = Handle<me_ttest_report, me_ttest_report_free>;
using Svm = Handle<me_svm, me_svm_free>;
using EvalReport = Handle<me_eval_report, me_eval_report_free>;

struct Options {
  std::string corpus;
  std::string labeled;
  std::string model = "cbow";
  std::optional<std::size_t> dim;
  std::optional<std::uint32_t> window;
  std::optional<std::uint32_t> epochs;
  double lr = 0.05;
  std::uint32_t negatives = 5;
  double xmax = 100.0;
  double alpha_exp = 0.75;
  std::uint32_t folds = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out = ".";
  std::uint64_t min_count = 5;
  std::string aggregate = "mean";
  std::string weighting = "inverse_distance";
  double significance = 0.05;
  double lambda = 1e-4;
  std::uint32_t svm_epochs = 100;
};

struct Paths {
  explicit Paths(const Options& o)
      : dir(o.out),
        vocab(dir / "vocab.txt"),
        cooccur(dir / "cooccur.bin"),
        embeddings(dir / ("embeddings_" + o.model + ".txt")),
        sentvecs(dir / ("sentvecs_" + o.model + ".txt")),
        ttest(dir / ("ttest_" + o.model + ".tsv")),
        cv(dir / ("cv_" + o.model + ".tsv")),
        svm(dir / ("svm_" + o.model + ".txt")) {}
  fs::path dir, vocab, cooccur, embeddings, sentvecs, ttest, cv, svm;
};

double json_number(double v) { return std::isfinite(v) ? v : 0.0; }

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void require_file(const fs::path& path, const char* hint) {
  if (!fs::is_regular_file(path)) {
    throw CallError(ME_ERR_IO, "missing input " + path.string() + " (" + hint + ")");
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CallError(ME_ERR_IO, "cannot create output directory " + dir.string());
}

Corpus load_corpus(const Options& o) {
  me_corpus* raw = nullptr;
  check(me_corpus_load(o.corpus.c_str(), &raw), "load corpus");
  return Corpus(raw);
}

Vocab load_vocab(const Paths& p) {
  require_file(p.vocab, "run 'vocab' first");
  me_vocab* raw = nullptr;
  check(me_vocab_load(p.vocab.c_str(), &raw), "load vocabulary");
  return Vocab(raw);
}

me_weighting weighting_of(const Options& o) {
  return o.weighting == "flat" ? ME_WEIGHTING_FLAT : ME_WEIGHTING_INVERSE_DISTANCE;
}

json run_vocab(const Options& o, const Paths& p, const Corpus& corpus) {
  me_vocab* raw = nullptr;
  check(me_vocab_build(corpus.get(), o.min_count, o.threads, &raw), "build vocabulary");
  Vocab vocab(raw);
  ensure_dir(p.dir);
  check(me_vocab_save(vocab.get(), p.vocab.c_str()), "save vocabulary");
  return {{"vocab_size", me_vocab_size(vocab.get())},
          {"tokens", me_corpus_tokens(corpus.get())},
          {"segments", me_corpus_segments(corpus.get())},
          {"vocab", p.vocab.string()}};
}

json run_cooccur(const Options& o, const Paths& p, const Corpus& corpus, const Vocab& vocab) {
  me_cooccur* raw = nullptr;
  check(me_cooccur_build(corpus.get(), vocab.get(), o.window.value_or(10), weighting_of(o),
                         o.threads, &raw),
        "build co-occurrence table");
  Cooccur table(raw);
  ensure_dir(p.dir);
  check(me_cooccur_save(table.get(), p.cooccur.c_str()), "save co-occurrence table");
  return {{"entries", me_cooccur_entries(table.get())},
          {"window", o.window.value_or(10)},
          {"weighting", o.weighting},
          {"cooccur", p.cooccur.string()}};
}

json epoch_losses(const Embeddings& emb) {
  json losses = json::array();
  for (std::size_t e = 0; e < me_embeddings_epochs(emb.get()); ++e) {
    losses.push_back(me_embeddings_epoch_loss(emb.get(), e));
  }
  return losses;
}

json run_train_cbow(const Options& o, const Paths& p, const Corpus& corpus, const Vocab& vocab) {
  me_cbow_config config;
  me_cbow_config_default(&config);
  config.dim = o.dim.value_or(450);
  config.radius = o.window.value_or(5);
  config.lr = o.lr;
  config.epochs = o.epochs.value_or(5);
  config.negatives = o.negatives;
  config.seed = o.seed;
  config.threads = o.threads;
  me_embeddings* raw = nullptr;
  check(me_train_cbow(corpus.get(), vocab.get(), &config, &raw), "train CBOW");
  Embeddings emb(raw);
  ensure_dir(p.dir);
  check(me_embeddings_save(emb.get(), p.embeddings.c_str()), "save embeddings");
  return {{"model", "cbow"},
          {"dim", config.dim},
          {"window", config.radius},
          {"epochs", config.epochs},
          {"epoch_losses", epoch_losses(emb)},
          {"embeddings", p.embeddings.string()}};
}

json run_train_glove(const Options& o, const Paths& p, const Cooccur& table, const Vocab& vocab) {
  me_glove_config config;
  me_glove_config_default(&config);
  config.dim = o.dim.value_or(400);
  config.lr = o.lr;
  config.epochs = o.epochs.value_or(25);
  config.alpha_exp = o.alpha_exp;
  config.x_max = o.xmax;
  config.seed = o.seed;
  config.threads = o.threads;
  me_embeddings* raw = nullptr;
  check(me_train_glove(table.get(), vocab.get(), &config, &raw), "train GloVe");
  Embeddings emb(raw);
  ensure_dir(p.dir);
  check(me_embeddings_save(emb.get(), p.embeddings.c_str()), "save embeddings");
  return {{"model", "glove"},
          {"dim", config.dim},
          {"epochs", config.epochs},
          {"x_max", config.x_max},
          {"alpha_exp", config.alpha_exp},
          {"epoch_losses", epoch_losses(emb)},
          {"embeddings", p.embeddings.string()}};
}

Phrases load_phrases(const Options& o) {
  me_phrases* raw = nullptr;
  check(me_phrases_load(o.labeled.c_str(), &raw), "load labeled phrases");
  return Phrases(raw);
}

json run_embed(const Options& o, const Paths& p, const Phrases& phrases) {
  require_file(p.embeddings, "train the model first");
  me_embeddings* raw_emb = nullptr;
  check(me_embeddings_load(p.embeddings.c_str(), &raw_emb), "load embeddings");
  Embeddings emb(raw_emb);
  me_sentvecs* raw = nullptr;
  check(me_sentvecs_embed(phrases.get(), emb.get(),
                          o.aggregate == "sum" ? ME_AGGREGATE_SUM : ME_AGGREGATE_MEAN, &raw),
        "aggregate sentence vectors");
  SentVecs vecs(raw);
  ensure_dir(p.dir);
  check(me_sentvecs_save(vecs.get(), p.sentvecs.c_str()), "save sentence vectors");
  json excluded = json::array();
  for (std::size_t k = 0; k < me_sentvecs_excluded(vecs.get()); ++k) {
    excluded.push_back(me_sentvecs_excluded_index(vecs.get(), k));
  }
  return {{"phrases", me_phrases_count(phrases.get())},
          {"literal", me_sentvecs_count_label(vecs.get(), ME_LABEL_LITERAL)},
          {"metaphor", me_sentvecs_count_label(vecs.get(), ME_LABEL_METAPHOR)},
          {"excluded", excluded},
          {"mean_coverage", json_number(me_sentvecs_mean_coverage(vecs.get()))},
          {"aggregate", o.aggregate},
          {"sentvecs", p.sentvecs.string()}};
}

SentVecs load_sentvecs(const Paths& p) {
  require_file(p.sentvecs, "run 'embed' first");
  me_sentvecs* raw = nullptr;
  check(me_sentvecs_load(p.sentvecs.c_str(), &raw), "load sentence vectors");
  return SentVecs(raw);
}

json run_ttest(const Options& o, const Paths& p, const SentVecs& vecs) {
  me_ttest_report* raw = nullptr;
  check(me_ttest_groups(vecs.get(), o.significance, &raw), "t-test");
  TTestReport report(raw);
  ensure_dir(p.dir);
  check(me_ttest_report_save(report.get(), p.ttest.c_str()), "save t-test report");
  const me_ttest_result norm = me_ttest_report_norm(report.get());
  return {{"dimensions", me_ttest_report_dimensions(report.get())},
          {"significant_dimensions", me_ttest_report_significant(report.get())},
          {"alpha", o.significance},
          {"norm", {{"t", nullable(norm.t)}, {"df", norm.df}, {"p", norm.p},
                    {"significant", norm.significant != 0}}},
          {"report", p.ttest.string()}};
}

json run_cv(const Options& o, const Paths& p, const SentVecs& vecs) {
  me_cv_config config;
  me_cv_config_default(&config);
  config.folds = o.folds;
  config.seed = o.seed;
  config.svm.lambda = o.lambda;
  config.svm.epochs = o.svm_epochs;
  config.svm.seed = o.seed;
  config.threads = o.threads;
  me_eval_report* raw = nullptr;
  check(me_cross_validate(vecs.get(), &config, &raw), "cross-validate");
  EvalReport report(raw);
  me_svm* raw_svm = nullptr;
  check(me_svm_train(vecs.get(), &config.svm, &raw_svm), "train final SVM");
  Svm svm(raw_svm);
  ensure_dir(p.dir);
  check(me_eval_report_save(report.get(), p.cv.c_str()), "save CV report");
  check(me_svm_save(svm.get(), p.svm.c_str()), "save SVM model");
  json folds = json::array();
  for (std::size_t f = 0; f < me_eval_report_folds(report.get()); ++f) {
    const me_fold_metrics m = me_eval_report_fold(report.get(), f);
    folds.push_back({{"accuracy", m.accuracy},
                     {"precision", m.precision_defined ? json(m.precision) : json(nullptr)}});
  }
  return {{"folds", o.folds},
          {"mean_accuracy", me_eval_report_mean_accuracy(report.get())},
          {"mean_precision", nullable(me_eval_report_mean_precision(report.get()))},
          {"per_fold", folds},
          {"report", p.cv.string()},
          {"svm", p.svm.string()}};
}

json run_pipeline(const Options& o, const Paths& p) {
  // Inputs are parsed up front so bad files fail before anything is written.
  Corpus corpus = load_corpus(o);
  Phrases phrases = load_phrases(o);
  json summary;
  summary["vocab"] = run_vocab(o, p, corpus);
  Vocab vocab = load_vocab(p);
  if (o.model == "cbow") {
    summary["train"] = run_train_cbow(o, p, corpus, vocab);
  } else {
    summary["cooccur"] = run_cooccur(o, p, corpus, vocab);
    me_cooccur* raw = nullptr;
    check(me_cooccur_load(p.cooccur.c_str(), &raw), "load co-occurrence table");
    Cooccur table(raw);
    summary["train"] = run_train_glove(o, p, table, vocab);
  }
  summary["embed"] = run_embed(o, p, phrases);
  SentVecs vecs = load_sentvecs(p);
  summary["ttest"] = run_ttest(o, p, vecs);
  summary["cv"] = run_cv(o, p, vecs);
  return summary;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word embeddings, sentence vectors and metaphor classification"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;

  app.add_option("--corpus", o.corpus, "raw UTF-8 corpus, one segment per line")
      ->check(CLI::ExistingFile);
  app.add_option("--labeled", o.labeled, "labeled phrase TSV")->check(CLI::ExistingFile);
  app.add_option("--model", o.model, "embedding model")
      ->check(CLI::IsMember({"cbow", "glove"}));
  app.add_option("--dim", o.dim, "embedding dimension (cbow 450, glove 400)")
      ->check(CLI::PositiveNumber);
  app.add_option("--window", o.window,
                 "CBOW context radius (5) or co-occurrence window C (10)")
      ->check(CLI::PositiveNumber);
  app.add_option("--epochs", o.epochs, "training epochs (cbow 5, glove 25)");
  app.add_option("--lr", o.lr, "initial learning rate")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--negatives", o.negatives, "negative samples per window, 0 = exact softmax")
      ->capture_default_str();
  app.add_option("--xmax", o.xmax, "GloVe weight cutoff")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--alpha-exp", o.alpha_exp, "GloVe weight exponent")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--folds", o.folds, "cross-validation folds")->capture_default_str()
      ->check(CLI::Range(2u, 1000000u));
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads")->capture_default_str()
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--min-count", o.min_count, "minimum token frequency")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--aggregate", o.aggregate, "sentence aggregation")->capture_default_str()
      ->check(CLI::IsMember({"mean", "sum"}));
  app.add_option("--cooccur-weighting", o.weighting, "co-occurrence weighting")
      ->capture_default_str()->check(CLI::IsMember({"flat", "inverse_distance"}));
  app.add_option("--significance", o.significance, "t-test significance level")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--lambda", o.lambda, "SVM regularization strength")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--svm-epochs", o.svm_epochs, "SVM training epochs")->capture_default_str();

  auto* vocab_cmd = app.add_subcommand("vocab", "build the vocabulary");
  auto* cooccur_cmd = app.add_subcommand("cooccur", "build the co-occurrence table");
  auto* cbow_cmd = app.add_subcommand("train-cbow", "train CBOW embeddings");
  auto* glove_cmd = app.add_subcommand("train-glove", "train GloVe embeddings");
  auto* embed_cmd = app.add_subcommand("embed", "aggregate labeled phrases into vectors");
  auto* ttest_cmd = app.add_subcommand("ttest", "Welch t-tests literal vs metaphor");
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validated linear SVM");
  auto* pipeline_cmd = app.add_subcommand("pipeline", "run every step");

  CLI11_PARSE(app, argc, argv);

  auto need = [](const std::string& value, const char* flag) {
    if (value.empty()) throw CallError(ME_ERR_INVALID_ARGUMENT, std::string(flag) + " is required");
  };

  std::string command;
  try {
    const Paths p(o);
    json summary;
    if (vocab_cmd->parsed()) {
      command = "vocab";
      need(o.corpus, "--corpus");
      Corpus corpus = load_corpus(o);
      summary = run_vocab(o, p, corpus);
    } else if (cooccur_cmd->parsed()) {
      command = "cooccur";
      need(o.corpus, "--corpus");
      Vocab vocab = load_vocab(p);
      Corpus corpus = load_corpus(o);
      summary = run_cooccur(o, p, corpus, vocab);
    } else if (cbow_cmd->parsed()) {
      command = "train-cbow";
      need(o.corpus, "--corpus");
      o.model = "cbow";
      const Paths cp(o);
      Vocab vocab = load_vocab(cp);
      Corpus corpus = load_corpus(o);
      summary = run_train_cbow(o, cp, corpus, vocab);
    } else if (glove_cmd->parsed()) {
      command = "train-glove";
      o.model = "glove";
      const Paths gp(o);
      Vocab vocab = load_vocab(gp);
      require_file(gp.cooccur, "run 'cooccur' first");
      me_cooccur* raw = nullptr;
      check(me_cooccur_load(gp.cooccur.c_str(), &raw), "load co-occurrence table");
      Cooccur table(raw);
      summary = run_train_glove(o, gp, table, vocab);
    } else if (embed_cmd->parsed()) {
      command = "embed";
      need(o.labeled, "--labeled");
      Phrases phrases = load_phrases(o);
      summary = run_embed(o, p, phrases);
    } else if (ttest_cmd->parsed()) {
      command = "ttest";
      SentVecs vecs = load_sentvecs(p);
      summary = run_ttest(o, p, vecs);
    } else if (cv_cmd->parsed()) {
      command = "cv";
      SentVecs vecs = load_sentvecs(p);
      summary = run_cv(o, p, vecs);
    } else if (pipeline_cmd->parsed()) {
      command = "pipeline";
      need(o.corpus, "--corpus");
      need(o.labeled, "--labeled");
      summary = run_pipeline(o, p);
      summary["model"] = o.model;
      summary["seed"] = o.seed;
      summary["threads"] = o.threads;
    }
    summary["command"] = command;
    summary["status"] = "ok";
    std::cout << summary.dump() << std::endl;
    return 0;
  } catch (const CallError& e) {
    std::cerr << "metaembed " << command << ": " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "metaembed " << command << ": " << e.what() << std::endl;
    return 3;
  }
}
