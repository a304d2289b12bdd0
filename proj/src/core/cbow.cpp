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

#include "metaembed/cbow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "metaembed/error.hpp"

namespace metaembed {
namespace {

// log(1 + e^x) without overflow.
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void mean_into(const CbowModel& model, const ContextWindow& window, std::span<double> h) {
  std::fill(h.begin(), h.end(), 0.0);
  for (WordId id : window.context) {
    const auto row = model.input.row(id);
    for (std::size_t k = 0; k < h.size(); ++k) h[k] += row[k];
  }
  const double inv = 1.0 / static_cast<double>(window.context.size());
  for (double& v : h) v *= inv;
}

void check_window(const CbowModel& model, const ContextWindow& window) {
  const std::size_t v = model.vocab_size();
  if (window.center >= v) {
    throw Error(ErrorCode::kInvalidArgument, "center id outside vocabulary");
  }
  for (WordId id : window.context) {
    if (id >= v) throw Error(ErrorCode::kInvalidArgument, "context id outside vocabulary");
  }
}

// Logits of the whole vocabulary for hidden vector h.
std::vector<double> logits(const CbowModel& model, std::span<const double> h) {
  std::vector<double> z(model.vocab_size());
  for (std::size_t v = 0; v < z.size(); ++v) z[v] = dot(model.output.row(v), h);
  return z;
}

void softmax_in_place(std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& x : z) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double& x : z) x /= sum;
}

// Scores and their loss derivatives for the negative-sampling targets:
// target 0 is the center (label 1), the rest are negatives (label 0).
struct NegativeTerms {
  std::vector<WordId> targets;
  std::vector<double> dscore;
  double loss = 0.0;
};

NegativeTerms negative_terms(const CbowModel& model, const ContextWindow& window,
                             std::span<const double> h, std::span<const WordId> negatives) {
  NegativeTerms terms;
  terms.targets.reserve(negatives.size() + 1);
  terms.targets.push_back(window.center);
  terms.targets.insert(terms.targets.end(), negatives.begin(), negatives.end());
  terms.dscore.resize(terms.targets.size());
  for (std::size_t t = 0; t < terms.targets.size(); ++t) {
    const double s = dot(model.output.row(terms.targets[t]), h);
    if (t == 0) {
      terms.loss += softplus(-s);
      terms.dscore[t] = logistic(s) - 1.0;
    } else {
      terms.loss += softplus(s);
      terms.dscore[t] = logistic(s);
    }
  }
  return terms;
}

// Applies output-row updates for (target, dscore) pairs and the shared
// hidden-layer gradient to the context rows. dh is built from pre-step
// output rows so the step follows the exact gradient.
void apply_step(CbowModel& model, const ContextWindow& window, std::span<const double> h,
                std::span<const WordId> targets, std::span<const double> dscore,
                double lr) {
  const std::size_t dim = model.dim();
  std::vector<double> dh(dim, 0.0);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto out = model.output.row(targets[t]);
    for (std::size_t k = 0; k < dim; ++k) dh[k] += dscore[t] * out[k];
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    auto out = model.output.row(targets[t]);
    const double g = lr * dscore[t];
    for (std::size_t k = 0; k < dim; ++k) out[k] -= g * h[k];
  }
  const double share = lr / static_cast<double>(window.context.size());
  for (WordId id : window.context) {
    auto in = model.input.row(id);
    for (std::size_t k = 0; k < dim; ++k) in[k] -= share * dh[k];
  }
}

void require_finite(const CbowModel& model) {
  if (!all_finite(model.input.values()) || !all_finite(model.output.values())) {
    throw Error(ErrorCode::kNumeric, "CBOW parameters became non-finite");
  }
}

}  // namespace

CbowModel CbowModel::initialize(std::size_t vocab_size, std::size_t dim,
                                std::uint32_t radius, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "dimension must be at least 1");
  if (vocab_size < 1) throw Error(ErrorCode::kInvalidArgument, "empty vocabulary");
  CbowModel model;
  model.input = Matrix(vocab_size, dim);
  model.output = Matrix(vocab_size, dim, 0.0);
  model.radius = radius;
  Rng rng(seed);
  const double scale = 0.5 / static_cast<double>(dim);
  for (double& v : model.input.values()) v = uniform(rng, -scale, scale);
  return model;
}

std::optional<std::vector<double>> context_mean(const CbowModel& model,
                                                const ContextWindow& window) {
  if (window.context.empty()) return std::nullopt;
  check_window(model, window);
  std::vector<double> h(model.dim());
  mean_into(model, window, h);
  return h;
}

std::vector<double> softmax_exact(const CbowModel& model, const ContextWindow& window) {
  auto h = context_mean(model, window);
  if (!h) throw Error(ErrorCode::kInvalidArgument, "empty context window");
  std::vector<double> p = logits(model, *h);
  softmax_in_place(p);
  return p;
}

double loss_exact(const CbowModel& model, const ContextWindow& window) {
  auto h = context_mean(model, window);
  if (!h) throw Error(ErrorCode::kInvalidArgument, "empty context window");
  const std::vector<double> z = logits(model, *h);
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double x : z) sum += std::exp(x - top);
  // Clamp tiny negative round-off; the loss is a -log probability.
  return std::max(0.0, top + std::log(sum) - z[window.center]);
}

CbowGradient gradient_exact(const CbowModel& model, const ContextWindow& window) {
  auto h = context_mean(model, window);
  if (!h) throw Error(ErrorCode::kInvalidArgument, "empty context window");
  std::vector<double> g = logits(model, *h);
  softmax_in_place(g);
  g[window.center] -= 1.0;

  const std::size_t dim = model.dim();
  CbowGradient grad{Matrix(model.vocab_size(), dim), Matrix(model.vocab_size(), dim)};
  std::vector<double> dh(dim, 0.0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto out = model.output.row(v);
    auto dout = grad.output.row(v);
    for (std::size_t k = 0; k < dim; ++k) {
      dout[k] = g[v] * (*h)[k];
      dh[k] += g[v] * out[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(window.context.size());
  for (WordId id : window.context) {
    auto din = grad.input.row(id);
    for (std::size_t k = 0; k < dim; ++k) din[k] += inv * dh[k];
  }
  return grad;
}

std::optional<double> sgd_step_exact(CbowModel& model, const ContextWindow& window,
                                     double lr) {
  auto h = context_mean(model, window);
  if (!h) return std::nullopt;
  std::vector<double> g = logits(model, *h);
  const double top = *std::max_element(g.begin(), g.end());
  double sum = 0.0;
  for (double x : g) sum += std::exp(x - top);
  const double loss = std::max(0.0, top + std::log(sum) - g[window.center]);
  if (lr == 0.0) return loss;

  softmax_in_place(g);
  g[window.center] -= 1.0;
  std::vector<WordId> targets(model.vocab_size());
  for (std::size_t v = 0; v < targets.size(); ++v) targets[v] = static_cast<WordId>(v);
  apply_step(model, window, *h, targets, g, lr);
  return loss;
}

NoiseSampler::NoiseSampler(std::span<const std::uint64_t> frequencies, double power) {
  cumulative_.reserve(frequencies.size());
  double total = 0.0;
  for (std::uint64_t f : frequencies) {
    total += std::pow(static_cast<double>(f), power);
    cumulative_.push_back(total);
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise distribution has no mass");
  }
}

WordId NoiseSampler::sample(Rng& rng) const {
  const double target = uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  return static_cast<WordId>(it - cumulative_.begin());
}

double NoiseSampler::probability(WordId id) const {
  const double lo = id == 0 ? 0.0 : cumulative_[id - 1];
  return (cumulative_[id] - lo) / cumulative_.back();
}

std::vector<WordId> draw_negatives(WordId center, std::uint32_t k,
                                   const NoiseSampler& sampler, Rng& rng) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "negatives count must be at least 1");
  std::vector<WordId> negatives;
  negatives.reserve(k);
  for (std::uint32_t n = 0; n < k; ++n) {
    WordId id = sampler.sample(rng);
    if (id == center) id = sampler.sample(rng);
    if (id != center) negatives.push_back(id);
  }
  return negatives;
}

double loss_negative(const CbowModel& model, const ContextWindow& window,
                     std::span<const WordId> negatives) {
  auto h = context_mean(model, window);
  if (!h) throw Error(ErrorCode::kInvalidArgument, "empty context window");
  return negative_terms(model, window, *h, negatives).loss;
}

CbowGradient gradient_negative(const CbowModel& model, const ContextWindow& window,
                               std::span<const WordId> negatives) {
  auto h = context_mean(model, window);
  if (!h) throw Error(ErrorCode::kInvalidArgument, "empty context window");
  const NegativeTerms terms = negative_terms(model, window, *h, negatives);

  const std::size_t dim = model.dim();
  CbowGradient grad{Matrix(model.vocab_size(), dim), Matrix(model.vocab_size(), dim)};
  std::vector<double> dh(dim, 0.0);
  for (std::size_t t = 0; t < terms.targets.size(); ++t) {
    const auto out = model.output.row(terms.targets[t]);
    auto dout = grad.output.row(terms.targets[t]);
    for (std::size_t k = 0; k < dim; ++k) {
      dout[k] += terms.dscore[t] * (*h)[k];
      dh[k] += terms.dscore[t] * out[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(window.context.size());
  for (WordId id : window.context) {
    auto din = grad.input.row(id);
    for (std::size_t k = 0; k < dim; ++k) din[k] += inv * dh[k];
  }
  return grad;
}

std::optional<double> sgd_step_negative(CbowModel& model, const ContextWindow& window,
                                        double lr, std::span<const WordId> negatives) {
  auto h = context_mean(model, window);
  if (!h) return std::nullopt;
  for (WordId id : negatives) {
    if (id >= model.vocab_size()) {
      throw Error(ErrorCode::kInvalidArgument, "negative id outside vocabulary");
    }
  }
  const NegativeTerms terms = negative_terms(model, window, *h, negatives);
  if (lr != 0.0) apply_step(model, window, *h, terms.targets, terms.dscore, lr);
  return terms.loss;
}

std::optional<double> sgd_step_negative(CbowModel& model, const ContextWindow& window,
                                        double lr, std::uint32_t k,
                                        const NoiseSampler& sampler, Rng& rng) {
  if (window.context.empty()) return std::nullopt;
  const std::vector<WordId> negatives = draw_negatives(window.center, k, sampler, rng);
  return sgd_step_negative(model, window, lr, negatives);
}

std::vector<double> train_cbow_model(CbowModel& model, std::span<const IdSegment> segments,
                                     std::span<const std::uint64_t> frequencies,
                                     const CbowConfig& config) {
  if (config.radius < 1) throw Error(ErrorCode::kInvalidArgument, "radius must be at least 1");
  if (!(config.lr0 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lr must be positive");
  if (frequencies.size() != model.vocab_size()) {
    throw Error(ErrorCode::kInvalidArgument, "frequency table does not match the model");
  }
  std::uint64_t tokens = 0;
  for (const IdSegment& seg : segments) {
    for (WordId id : seg) {
      if (id >= model.vocab_size()) {
        throw Error(ErrorCode::kInvalidArgument, "word id outside vocabulary");
      }
    }
    tokens += seg.size();
  }
  if (tokens == 0) throw Error(ErrorCode::kEmptyInput, "empty training corpus");

  std::optional<NoiseSampler> sampler;
  if (config.negatives > 0) sampler.emplace(frequencies, config.noise_power);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(segments.size())));
  const double total_windows = static_cast<double>(tokens) * config.epochs;
  std::atomic<std::uint64_t> processed{0};
  std::vector<double> epoch_losses;

  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<double> loss_sum(workers, 0.0);
    std::vector<std::uint64_t> loss_count(workers, 0);
    auto run = [&](unsigned worker) {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(epoch) * workers + worker));
      const std::size_t begin = segments.size() * worker / workers;
      const std::size_t end = segments.size() * (worker + 1) / workers;
      for (std::size_t s = begin; s < end; ++s) {
        for_each_window(segments[s], config.radius, [&](const ContextWindow& window) {
          const std::uint64_t done = processed.fetch_add(1, std::memory_order_relaxed);
          const double lr =
              config.lr0 * std::max(config.min_lr_ratio,
                                    1.0 - static_cast<double>(done) / total_windows);
          const std::optional<double> loss =
              sampler ? sgd_step_negative(model, window, lr, config.negatives, *sampler, rng)
                      : sgd_step_exact(model, window, lr);
          if (loss) {
            loss_sum[worker] += *loss;
            ++loss_count[worker];
          }
        });
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
    std::uint64_t count = 0;
    for (unsigned w = 0; w < workers; ++w) {
      sum += loss_sum[w];
      count += loss_count[w];
    }
    epoch_losses.push_back(count > 0 ? sum / static_cast<double>(count) : 0.0);
  }
  return epoch_losses;
}

TrainingResult train_cbow(std::span<const IdSegment> segments, const Vocabulary& vocab,
                          const CbowConfig& config) {
  if (vocab.empty()) throw Error(ErrorCode::kEmptyVocabulary, "vocabulary not built");
  CbowModel model = CbowModel::initialize(vocab.size(), config.dim, config.radius,
                                          derive_seed(config.seed, 0xCB0));
  const std::vector<std::uint64_t> freqs = vocab.frequencies();
  TrainingResult result;
  result.epoch_losses = train_cbow_model(model, segments, freqs, config);
  std::vector<std::string> words;
  words.reserve(vocab.size());
  for (const auto& e : vocab.entries()) words.push_back(e.word);
  result.embeddings = EmbeddingMatrix(std::move(words), std::move(model.input));
  return result;
}

}  // namespace metaembed
