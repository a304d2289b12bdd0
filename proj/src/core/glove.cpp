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

#include "metaembed/glove.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "metaembed/error.hpp"
#include "metaembed/random.hpp"

namespace metaembed {
namespace {

void check_params(const WeightFunctionParams& params) {
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "weight exponent must lie in (0, 1]");
  }
  if (!(params.x_max > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "x_max must be positive");
  }
}

void check_pair(const GloveModel& model, WordId i, WordId j, double x) {
  if (!(x > 0.0)) {
    throw Error(ErrorCode::kDomain, "co-occurrence value must be positive, got " +
                                        std::to_string(x));
  }
  if (i >= model.vocab_size() || j >= model.vocab_size()) {
    throw Error(ErrorCode::kInvalidArgument, "pair id outside the model vocabulary");
  }
}

void require_finite(const GloveModel& model) {
  if (!all_finite(model.w.values()) || !all_finite(model.w_tilde.values()) ||
      !all_finite(model.b) || !all_finite(model.b_tilde)) {
    throw Error(ErrorCode::kNumeric, "GloVe parameters became non-finite");
  }
}

}  // namespace

double weight_f(double x, const WeightFunctionParams& params) {
  check_params(params);
  if (x < 0.0 || std::isnan(x)) {
    throw Error(ErrorCode::kDomain, "weight function needs x >= 0");
  }
  if (x >= params.x_max) return 1.0;
  return std::pow(x / params.x_max, params.alpha);
}

GloveModel GloveModel::initialize(std::size_t vocab_size, std::size_t dim,
                                  std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "dimension must be at least 1");
  if (vocab_size < 1) throw Error(ErrorCode::kInvalidArgument, "empty vocabulary");
  GloveModel model;
  model.w = Matrix(vocab_size, dim);
  model.w_tilde = Matrix(vocab_size, dim);
  model.b.assign(vocab_size, 0.0);
  model.b_tilde.assign(vocab_size, 0.0);
  model.grad_w = Matrix(vocab_size, dim, 1.0);
  model.grad_w_tilde = Matrix(vocab_size, dim, 1.0);
  model.grad_b.assign(vocab_size, 1.0);
  model.grad_b_tilde.assign(vocab_size, 1.0);

  Rng rng(seed);
  const double scale = 0.5 / static_cast<double>(dim);
  for (double& v : model.w.values()) v = uniform(rng, -scale, scale);
  for (double& v : model.w_tilde.values()) v = uniform(rng, -scale, scale);
  for (double& v : model.b) v = uniform(rng, -scale, scale);
  for (double& v : model.b_tilde) v = uniform(rng, -scale, scale);
  return model;
}

double GloveModel::residual(WordId i, WordId j, double x) const {
  return dot(w.row(i), w_tilde.row(j)) + b[i] + b_tilde[j] - std::log(x);
}

double pair_loss(const GloveModel& model, WordId i, WordId j, double x,
                 const WeightFunctionParams& params) {
  check_pair(model, i, j, x);
  const double r = model.residual(i, j, x);
  return weight_f(x, params) * r * r;
}

double total_loss(const GloveModel& model, const CooccurrenceTable& table,
                  const WeightFunctionParams& params) {
  double sum = 0.0;
  for (const CooccurrenceEntry& e : table.entries()) {
    sum += pair_loss(model, e.i, e.j, e.x, params);
  }
  return sum;
}

GloveGradient pair_gradient(const GloveModel& model, WordId i, WordId j, double x,
                            const WeightFunctionParams& params) {
  check_pair(model, i, j, x);
  const double g = 2.0 * weight_f(x, params) * model.residual(i, j, x);
  GloveGradient grad;
  const auto wi = model.w.row(i);
  const auto wj = model.w_tilde.row(j);
  grad.w_i.resize(model.dim());
  grad.w_tilde_j.resize(model.dim());
  for (std::size_t k = 0; k < model.dim(); ++k) {
    grad.w_i[k] = g * wj[k];
    grad.w_tilde_j[k] = g * wi[k];
  }
  grad.b_i = g;
  grad.b_tilde_j = g;
  return grad;
}

double adagrad_step(GloveModel& model, const CooccurrenceEntry& entry, double lr0,
                    const WeightFunctionParams& params) {
  check_pair(model, entry.i, entry.j, entry.x);
  const double f = weight_f(entry.x, params);
  const double r = model.residual(entry.i, entry.j, entry.x);
  const double loss = f * r * r;
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kNumeric, "non-finite GloVe loss at pair (" +
                                         std::to_string(entry.i) + "," +
                                         std::to_string(entry.j) + ")");
  }
  const double g = 2.0 * f * r;
  if (g == 0.0) return loss;

  auto wi = model.w.row(entry.i);
  auto wj = model.w_tilde.row(entry.j);
  auto gwi = model.grad_w.row(entry.i);
  auto gwj = model.grad_w_tilde.row(entry.j);
  for (std::size_t k = 0; k < model.dim(); ++k) {
    const double d_wi = g * wj[k];
    const double d_wj = g * wi[k];
    wi[k] -= lr0 * d_wi / std::sqrt(gwi[k]);
    wj[k] -= lr0 * d_wj / std::sqrt(gwj[k]);
    gwi[k] += d_wi * d_wi;
    gwj[k] += d_wj * d_wj;
  }
  model.b[entry.i] -= lr0 * g / std::sqrt(model.grad_b[entry.i]);
  model.b_tilde[entry.j] -= lr0 * g / std::sqrt(model.grad_b_tilde[entry.j]);
  model.grad_b[entry.i] += g * g;
  model.grad_b_tilde[entry.j] += g * g;
  return loss;
}

std::vector<double> train_glove_model(GloveModel& model, const CooccurrenceTable& table,
                                      const GloveConfig& config) {
  if (table.empty()) throw Error(ErrorCode::kEmptyInput, "empty co-occurrence table");
  if (!(config.lr0 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lr0 must be positive");
  check_params(config.params);
  if (table.id_bound() > model.vocab_size()) {
    throw Error(ErrorCode::kInvalidArgument, "table references ids beyond the vocabulary");
  }

  const auto entries = table.entries();
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(entries.size())));
  std::vector<double> epoch_losses;

  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(config.seed, epoch));
    shuffle(std::span<std::size_t>(order), rng);

    std::vector<double> partial(workers, 0.0);
    auto run = [&](unsigned worker) {
      const std::size_t begin = order.size() * worker / workers;
      const std::size_t end = order.size() * (worker + 1) / workers;
      for (std::size_t k = begin; k < end; ++k) {
        partial[worker] += adagrad_step(model, entries[order[k]], config.lr0, config.params);
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    require_finite(model);
    double sum = 0.0;
    for (double p : partial) sum += p;
    epoch_losses.push_back(sum);
  }
  return epoch_losses;
}

TrainingResult train_glove(const CooccurrenceTable& table,
                           std::span<const std::string> words, const GloveConfig& config) {
  if (table.empty()) throw Error(ErrorCode::kEmptyInput, "empty co-occurrence table");
  GloveModel model = GloveModel::initialize(words.size(), config.dim,
                                            derive_seed(config.seed, 0x61E));
  TrainingResult result;
  result.epoch_losses = train_glove_model(model, table, config);
  Matrix combined = model.w;
  auto out = combined.values();
  const auto tilde = model.w_tilde.values();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += tilde[k];
  result.embeddings = EmbeddingMatrix(std::vector<std::string>(words.begin(), words.end()),
                                      std::move(combined));
  return result;
}

TrainingResult train_glove(const CooccurrenceTable& table, const Vocabulary& vocab,
                           const GloveConfig& config) {
  std::vector<std::string> words;
  words.reserve(vocab.size());
  for (const auto& e : vocab.entries()) words.push_back(e.word);
  return train_glove(table, words, config);
}

}  // namespace metaembed
