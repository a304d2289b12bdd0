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

#include "metaembed/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <thread>

#include "metaembed/error.hpp"
#include "metaembed/matrix.hpp"
#include "metaembed/random.hpp"
#include "metaembed/text_io.hpp"

namespace metaembed {
namespace {

double sign_of(Label label) { return label == Label::kMetaphor ? 1.0 : -1.0; }

std::size_t common_dim(std::span<const SentenceVector> data) {
  const std::size_t dim = data.front().values.size();
  for (const SentenceVector& v : data) {
    if (v.values.size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "sentence vectors differ in dimension");
    }
  }
  return dim;
}

void standardize_into(const SvmModel& model, std::span<const double> x,
                      std::span<double> z) {
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = (x[k] - model.mean[k]) / model.stddev[k];
}

double raw_margin(const SvmModel& model, std::span<const double> z) {
  return dot(model.weights, z) + model.bias;
}

void write_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out << ' ';
    out << format_double(values[k]);
  }
  out << '\n';
}

std::vector<double> read_row(std::istream& in, std::size_t dim, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kFormat, "model file is missing the " + what + " line");
  }
  const auto fields = split_fields(chomp(line));
  if (fields.size() != dim) {
    throw Error(ErrorCode::kFormat, "model " + what + " line has " +
                                        std::to_string(fields.size()) + " values, expected " +
                                        std::to_string(dim));
  }
  std::vector<double> row;
  row.reserve(dim);
  for (auto f : fields) row.push_back(parse_double(f, what));
  return row;
}

}  // namespace

SvmModel SvmModel::load(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormat, "empty model file");
  const auto header = split_fields(chomp(line));
  if (header.size() != 3) {
    throw Error(ErrorCode::kFormat, "model header must be 'D lambda bias'");
  }
  SvmModel model;
  const std::size_t dim = parse_uint(header[0], "D");
  model.lambda = parse_double(header[1], "lambda");
  model.bias = parse_double(header[2], "bias");
  model.weights = read_row(in, dim, "weights");
  model.mean = read_row(in, dim, "means");
  model.stddev = read_row(in, dim, "stds");
  for (double s : model.stddev) {
    if (!(s > 0.0)) throw Error(ErrorCode::kFormat, "model stds must be positive");
  }
  return model;
}

void SvmModel::write(std::ostream& out) const {
  out << dim() << ' ' << format_double(lambda) << ' ' << format_double(bias) << '\n';
  write_row(out, weights);
  write_row(out, mean);
  write_row(out, stddev);
}

void SvmModel::save(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path);
  write(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

SvmModel train_svm(std::span<const SentenceVector> train, const SvmConfig& config,
                   std::vector<double>* epoch_objectives) {
  if (train.empty()) throw Error(ErrorCode::kInvalidArgument, "empty training set");
  if (!(config.lambda > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  const std::size_t dim = common_dim(train);
  bool has_literal = false;
  bool has_metaphor = false;
  for (const SentenceVector& v : train) {
    (v.label == Label::kMetaphor ? has_metaphor : has_literal) = true;
  }
  if (!has_literal || !has_metaphor) {
    throw Error(ErrorCode::kInvalidArgument, "training set holds a single class");
  }

  SvmModel model;
  model.lambda = config.lambda;
  model.weights.assign(dim, 0.0);
  model.mean.assign(dim, 0.0);
  model.stddev.assign(dim, 0.0);
  const double n = static_cast<double>(train.size());
  for (const SentenceVector& v : train) {
    for (std::size_t k = 0; k < dim; ++k) model.mean[k] += v.values[k];
  }
  for (double& m : model.mean) m /= n;
  for (const SentenceVector& v : train) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = v.values[k] - model.mean[k];
      model.stddev[k] += d * d;
    }
  }
  for (double& s : model.stddev) {
    s = std::sqrt(s / n);
    if (!(s > 0.0)) s = 1.0;
  }

  Matrix z(train.size(), dim);
  for (std::size_t r = 0; r < train.size(); ++r) standardize_into(model, train[r].values, z.row(r));

  // Averaged stochastic subgradient descent. The step eta0 / (1 + lambda eta0 t)
  // is the Pegasos 1 / (lambda (t + t0)) schedule with t0 = 1 / (lambda eta0),
  // which avoids the huge first steps when lambda is small. The model is the
  // running average of every iterate. The bias is not regularized.
  constexpr double kEta0 = 0.01;
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::uint64_t t = 0;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.seed);
  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t idx : order) {
      const auto zi = z.row(idx);
      const double y = sign_of(train[idx].label);
      const double eta = kEta0 / (1.0 + config.lambda * kEta0 * static_cast<double>(t));
      const double margin = y * (dot(w, zi) + b);
      const double shrink = 1.0 - eta * config.lambda;
      for (double& v : w) v *= shrink;
      if (margin < 1.0) {
        for (std::size_t k = 0; k < dim; ++k) w[k] += eta * y * zi[k];
        b += eta * y;
      }
      ++t;
      const double mix = 1.0 / static_cast<double>(t);
      for (std::size_t k = 0; k < dim; ++k) model.weights[k] += mix * (w[k] - model.weights[k]);
      model.bias += mix * (b - model.bias);
    }
    if (epoch_objectives != nullptr) epoch_objectives->push_back(svm_objective(model, train));
  }
  if (!all_finite(model.weights) || !std::isfinite(model.bias)) {
    throw Error(ErrorCode::kNumeric, "SVM weights became non-finite");
  }
  return model;
}

Prediction predict(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "vector dimension " + std::to_string(x.size()) +
                                                 " does not match model dimension " +
                                                 std::to_string(model.dim()));
  }
  std::vector<double> z(x.size());
  standardize_into(model, x, z);
  Prediction p;
  p.margin = raw_margin(model, z);
  p.label = p.margin > 0.0 ? Label::kMetaphor : Label::kLiteral;
  return p;
}

double svm_objective(const SvmModel& model, std::span<const SentenceVector> data) {
  double hinge = 0.0;
  for (const SentenceVector& v : data) {
    const double m = predict(model, v.values).margin;
    hinge += std::max(0.0, 1.0 - sign_of(v.label) * m);
  }
  const double reg = 0.5 * model.lambda * dot(model.weights, model.weights);
  return reg + hinge / static_cast<double>(data.size());
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::uint32_t k,
                                                  std::uint64_t seed) {
  std::vector<Label> labels(n, Label::kLiteral);
  return kfold_split(labels, k, seed, false);
}

std::vector<std::vector<std::size_t>> kfold_split(std::span<const Label> labels,
                                                  std::uint32_t k, std::uint64_t seed,
                                                  bool stratified) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 folds");
  if (k > labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, std::to_string(k) + " folds for only " +
                                                 std::to_string(labels.size()) + " items");
  }
  Rng rng(seed);
  std::vector<std::size_t> deal;
  deal.reserve(labels.size());
  if (stratified) {
    std::vector<std::size_t> literal;
    std::vector<std::size_t> metaphor;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      (labels[i] == Label::kMetaphor ? metaphor : literal).push_back(i);
    }
    shuffle(std::span<std::size_t>(literal), rng);
    shuffle(std::span<std::size_t>(metaphor), rng);
    deal = std::move(literal);
    deal.insert(deal.end(), metaphor.begin(), metaphor.end());
  } else {
    deal.resize(labels.size());
    std::iota(deal.begin(), deal.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(deal), rng);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t p = 0; p < deal.size(); ++p) folds[p % k].push_back(deal[p]);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

double FoldMetrics::accuracy() const {
  const std::size_t total = tp + fp + tn + fn;
  return total == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
}

std::optional<double> FoldMetrics::precision() const {
  if (tp + fp == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

void EvalReport::write(std::ostream& out) const {
  out << "fold\taccuracy\tprecision\ttp\tfp\ttn\tfn\n";
  FoldMetrics sum;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const FoldMetrics& m = folds[f];
    const auto prec = m.precision();
    out << f << '\t' << format_double(m.accuracy()) << '\t'
        << (prec ? format_double(*prec) : std::string("NA")) << '\t' << m.tp << '\t' << m.fp
        << '\t' << m.tn << '\t' << m.fn << '\n';
    sum.tp += m.tp;
    sum.fp += m.fp;
    sum.tn += m.tn;
    sum.fn += m.fn;
  }
  out << "mean\t" << format_double(mean_accuracy) << '\t'
      << (precision_folds > 0 ? format_double(mean_precision) : std::string("NA")) << '\t'
      << sum.tp << '\t' << sum.fp << '\t' << sum.tn << '\t' << sum.fn << '\n';
}

void EvalReport::save(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path);
  write(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

EvalReport cross_validate(std::span<const SentenceVector> vectors, const CvConfig& config) {
  if (vectors.empty()) throw Error(ErrorCode::kInvalidArgument, "no vectors to evaluate");
  common_dim(vectors);
  std::vector<Label> labels;
  labels.reserve(vectors.size());
  for (const SentenceVector& v : vectors) labels.push_back(v.label);
  const auto folds = kfold_split(labels, config.folds, config.seed, config.stratified);

  std::vector<FoldMetrics> metrics(folds.size());
  std::vector<std::string> errors(folds.size());
  auto run_fold = [&](std::size_t f) {
    std::vector<char> held_out(vectors.size(), 0);
    for (std::size_t i : folds[f]) held_out[i] = 1;
    std::vector<SentenceVector> train;
    train.reserve(vectors.size() - folds[f].size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (!held_out[i]) train.push_back(vectors[i]);
    }
    SvmConfig svm = config.svm;
    svm.seed = derive_seed(config.svm.seed, f);
    try {
      const SvmModel model = train_svm(train, svm);
      for (std::size_t i : folds[f]) {
        const bool predicted = predict(model, vectors[i].values).label == Label::kMetaphor;
        const bool actual = vectors[i].label == Label::kMetaphor;
        FoldMetrics& m = metrics[f];
        if (predicted && actual) ++m.tp;
        else if (predicted) ++m.fp;
        else if (actual) ++m.fn;
        else ++m.tn;
      }
    } catch (const Error& e) {
      errors[f] = e.what();
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(folds.size())));
  if (workers == 1) {
    for (std::size_t f = 0; f < folds.size(); ++f) run_fold(f);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t f = w; f < folds.size(); f += workers) run_fold(f);
      });
    }
  }
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (!errors[f].empty()) {
      throw Error(ErrorCode::kInvalidArgument, "fold " + std::to_string(f) + ": " + errors[f]);
    }
  }

  EvalReport report;
  report.folds = std::move(metrics);
  for (const FoldMetrics& m : report.folds) {
    report.mean_accuracy += m.accuracy();
    if (auto p = m.precision()) {
      report.mean_precision += *p;
      ++report.precision_folds;
    }
  }
  report.mean_accuracy /= static_cast<double>(report.folds.size());
  if (report.precision_folds > 0) {
    report.mean_precision /= static_cast<double>(report.precision_folds);
  }
  return report;
}

}  // namespace metaembed
