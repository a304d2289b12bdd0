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

#ifndef METAEMBED_CLASSIFIER_HPP_
#define METAEMBED_CLASSIFIER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "metaembed/corpus.hpp"
#include "metaembed/sentvec.hpp"

namespace metaembed {

struct SvmConfig {
  double lambda = 1e-4;
  std::uint32_t epochs = 100;
  std::uint64_t seed = 1;
};

// Linear SVM over standardized features. Labels map literal -> -1,
// metaphor -> +1.
struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1e-4;
  std::vector<double> mean;
  std::vector<double> stddev;  // 1 for dimensions that are constant in training

  std::size_t dim() const noexcept { return weights.size(); }

  static SvmModel load(const std::filesystem::path& path);
  // Line 1 `D lambda bias`, line 2 weights, line 3 means, line 4 stds.
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;
};

struct Prediction {
  Label label = Label::kLiteral;
  double margin = 0.0;
};

// Minimizes lambda/2 |w|^2 + mean hinge by averaged stochastic subgradient
// descent, one seeded shuffled pass per epoch, starting from zero.
// If `epoch_objectives` is given it receives the training objective after
// every epoch.
SvmModel train_svm(std::span<const SentenceVector> train, const SvmConfig& config,
                   std::vector<double>* epoch_objectives = nullptr);

// Metaphor iff the margin w . z(x) + b is strictly positive, z being the
// stored standardization.
Prediction predict(const SvmModel& model, std::span<const double> x);

// lambda/2 |w|^2 + mean hinge loss over `data`.
double svm_objective(const SvmModel& model, std::span<const SentenceVector> data);

// Partitions 0..n-1 into k folds whose sizes differ by at most 1.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::uint32_t k,
                                                  std::uint64_t seed);
// Stratified form: each class is shuffled and dealt round-robin, so the
// per-fold count of each class also differs by at most 1 across folds.
std::vector<std::vector<std::size_t>> kfold_split(std::span<const Label> labels,
                                                  std::uint32_t k, std::uint64_t seed,
                                                  bool stratified);

struct CvConfig {
  std::uint32_t folds = 10;
  bool stratified = true;
  std::uint64_t seed = 1;
  SvmConfig svm;
  unsigned threads = 1;
};

// Confusion counts take metaphor as the positive class.
struct FoldMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  double accuracy() const;
  // nullopt when the fold predicts no metaphor.
  std::optional<double> precision() const;
};

struct EvalReport {
  std::vector<FoldMetrics> folds;
  double mean_accuracy = 0.0;
  // Over the folds where precision is defined.
  double mean_precision = 0.0;
  std::size_t precision_folds = 0;

  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
};

// Trains on k-1 folds and scores the held-out one, for every fold. Fold
// seeds derive from config.seed, so the report does not depend on threads.
EvalReport cross_validate(std::span<const SentenceVector> vectors, const CvConfig& config);

}  // namespace metaembed

#endif  // METAEMBED_CLASSIFIER_HPP_
