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

#ifndef METAEMBED_CBOW_HPP_
#define METAEMBED_CBOW_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "metaembed/cooccur.hpp"
#include "metaembed/corpus.hpp"
#include "metaembed/embeddings.hpp"
#include "metaembed/matrix.hpp"
#include "metaembed/random.hpp"

namespace metaembed {

// Continuous bag of words. The center word is predicted from the mean of the
// context rows of `input`; `output` holds the center-side vectors. Training
// minimizes J = -log P(center | context), i.e. maximizes the log-likelihood.
struct CbowModel {
  Matrix input;   // V x D, context side; these become the word embeddings
  Matrix output;  // V x D, center side
  std::uint32_t radius = 5;

  std::size_t vocab_size() const noexcept { return input.rows(); }
  std::size_t dim() const noexcept { return input.cols(); }

  // input ~ U[-0.5/D, 0.5/D], output = 0.
  static CbowModel initialize(std::size_t vocab_size, std::size_t dim,
                              std::uint32_t radius, std::uint64_t seed);
};

// Mean of the context input rows; nullopt for an empty context, which the
// trainers skip.
std::optional<std::vector<double>> context_mean(const CbowModel& model,
                                                const ContextWindow& window);

// Full softmax over the vocabulary for the window's context.
std::vector<double> softmax_exact(const CbowModel& model, const ContextWindow& window);

// -log softmax(output . h)[center]. Throws kInvalidArgument on an empty
// context.
double loss_exact(const CbowModel& model, const ContextWindow& window);

// Dense gradient of a per-window loss with respect to both matrices. Meant
// for small models; the SGD steps apply the same quantities sparsely.
struct CbowGradient {
  Matrix input;
  Matrix output;
};

CbowGradient gradient_exact(const CbowModel& model, const ContextWindow& window);

// Applies one exact-softmax SGD step and returns the pre-step loss. Empty
// contexts leave the model untouched and return nullopt.
std::optional<double> sgd_step_exact(CbowModel& model, const ContextWindow& window,
                                     double lr);

// Draws ids with probability proportional to freq^power.
class NoiseSampler {
 public:
  explicit NoiseSampler(std::span<const std::uint64_t> frequencies, double power = 0.75);

  WordId sample(Rng& rng) const;
  double probability(WordId id) const;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// k noise ids for one window. A draw equal to the center is redrawn once and
// dropped if it hits the center again, so fewer than k ids may come back.
std::vector<WordId> draw_negatives(WordId center, std::uint32_t k,
                                   const NoiseSampler& sampler, Rng& rng);

// Negative-sampling surrogate
//   -log s(o_c . h) - sum_n log s(-o_n . h),  s = logistic.
double loss_negative(const CbowModel& model, const ContextWindow& window,
                     std::span<const WordId> negatives);
CbowGradient gradient_negative(const CbowModel& model, const ContextWindow& window,
                               std::span<const WordId> negatives);

// Step with a fixed set of negatives; returns the pre-step surrogate loss.
std::optional<double> sgd_step_negative(CbowModel& model, const ContextWindow& window,
                                        double lr, std::span<const WordId> negatives);

// Draws k negatives from `rng` and steps.
std::optional<double> sgd_step_negative(CbowModel& model, const ContextWindow& window,
                                        double lr, std::uint32_t k,
                                        const NoiseSampler& sampler, Rng& rng);

struct CbowConfig {
  std::size_t dim = 450;
  std::uint32_t radius = 5;
  double lr0 = 0.05;
  // The rate decays linearly from lr0 to lr0 * min_lr_ratio over all windows.
  double min_lr_ratio = 1e-4;
  std::uint32_t epochs = 5;
  // 0 selects the exact softmax; only sensible for tiny vocabularies.
  std::uint32_t negatives = 5;
  double noise_power = 0.75;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Trains on id segments and returns the input vectors as embeddings. With
// threads > 1 the workers update shared rows without locks; results are
// bit-reproducible only at threads == 1.
TrainingResult train_cbow(std::span<const IdSegment> segments, const Vocabulary& vocab,
                          const CbowConfig& config);

// Lower-level form that continues training an existing model.
std::vector<double> train_cbow_model(CbowModel& model, std::span<const IdSegment> segments,
                                     std::span<const std::uint64_t> frequencies,
                                     const CbowConfig& config);

}  // namespace metaembed

#endif  // METAEMBED_CBOW_HPP_
