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

#ifndef METAEMBED_GLOVE_HPP_
#define METAEMBED_GLOVE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "metaembed/cooccur.hpp"
#include "metaembed/corpus.hpp"
#include "metaembed/embeddings.hpp"
#include "metaembed/matrix.hpp"

namespace metaembed {

struct WeightFunctionParams {
  double alpha = 0.75;
  double x_max = 100.0;
};

// (x / x_max)^alpha below the cutoff, 1 at or above it. Throws kDomain for
// x < 0 and kInvalidArgument for parameters outside 0 < alpha <= 1,
// x_max > 0.
double weight_f(double x, const WeightFunctionParams& params = {});

struct GloveModel {
  Matrix w;        // main vectors
  Matrix w_tilde;  // context vectors
  std::vector<double> b;
  std::vector<double> b_tilde;
  // AdaGrad sums of squared gradients, same shapes as the parameters.
  Matrix grad_w;
  Matrix grad_w_tilde;
  std::vector<double> grad_b;
  std::vector<double> grad_b_tilde;

  std::size_t vocab_size() const noexcept { return w.rows(); }
  std::size_t dim() const noexcept { return w.cols(); }

  // All four parameter groups ~ U[-0.5/D, 0.5/D]; accumulators start at 1.
  static GloveModel initialize(std::size_t vocab_size, std::size_t dim,
                               std::uint64_t seed);

  // w_i . w~_j + b_i + b~_j - ln x
  double residual(WordId i, WordId j, double x) const;
};

// f(X_ij) * (w_i . w~_j + b_i + b~_j - ln X_ij)^2; kDomain for X_ij <= 0.
double pair_loss(const GloveModel& model, WordId i, WordId j, double x,
                 const WeightFunctionParams& params = {});

// Sum of pair_loss over the table.
double total_loss(const GloveModel& model, const CooccurrenceTable& table,
                  const WeightFunctionParams& params = {});

// Gradient of pair_loss. Only row i of w/b and row j of w~/b~ are nonzero.
struct GloveGradient {
  std::vector<double> w_i;
  std::vector<double> w_tilde_j;
  double b_i = 0.0;
  double b_tilde_j = 0.0;
};

GloveGradient pair_gradient(const GloveModel& model, WordId i, WordId j, double x,
                            const WeightFunctionParams& params = {});

// One AdaGrad update on entry (i, j, x): each coordinate moves by
// lr0 * g / sqrt(G), G being its accumulator before this step, and G then
// grows by g^2. Returns the pre-step pair loss.
double adagrad_step(GloveModel& model, const CooccurrenceEntry& entry, double lr0,
                    const WeightFunctionParams& params = {});

struct GloveConfig {
  std::size_t dim = 400;
  double lr0 = 0.05;
  std::uint32_t epochs = 25;
  WeightFunctionParams params;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Visits the entries in a freshly seeded shuffled order each epoch; with
// several threads, contiguous slices of that order go to workers that update
// shared rows without locks. Throws kNumeric as soon as a parameter turns
// non-finite.
std::vector<double> train_glove_model(GloveModel& model, const CooccurrenceTable& table,
                                      const GloveConfig& config);

// Final embedding of word i is w_i + w~_i. `words` supplies one name per id;
// the table may not reference ids beyond it.
TrainingResult train_glove(const CooccurrenceTable& table,
                           std::span<const std::string> words,
                           const GloveConfig& config);
TrainingResult train_glove(const CooccurrenceTable& table, const Vocabulary& vocab,
                           const GloveConfig& config);

}  // namespace metaembed

#endif  // METAEMBED_GLOVE_HPP_
