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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "metaembed/cbow.hpp"
#include "metaembed/error.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace metaembed;

namespace {

CbowModel random_model(Rng& rng, std::size_t vocab, std::size_t dim, double scale = 1.0) {
  CbowModel model;
  model.input = Matrix(vocab, dim);
  model.output = Matrix(vocab, dim);
  for (double& v : model.input.values()) v = uniform(rng, -scale, scale);
  for (double& v : model.output.values()) v = uniform(rng, -scale, scale);
  return model;
}

ContextWindow random_window(Rng& rng, std::size_t vocab) {
  ContextWindow w;
  w.center = static_cast<WordId>(uniform_index(rng, vocab));
  const std::size_t n = 1 + uniform_index(rng, 4);
  for (std::size_t k = 0; k < n; ++k) w.context.push_back(static_cast<WordId>(uniform_index(rng, vocab)));
  w.radius = 2;
  return w;
}

// Flattens (input, output) so one finite-difference sweep covers both.
std::vector<double> flatten(const Matrix& input, const Matrix& output) {
  std::vector<double> out(input.values().begin(), input.values().end());
  out.insert(out.end(), output.values().begin(), output.values().end());
  return out;
}

double fd_error(CbowModel& model, const std::function<double()>& loss,
                const CbowGradient& analytic) {
  const auto num_in = oracle::central_differences(model.input.values(), loss);
  const auto num_out = oracle::central_differences(model.output.values(), loss);
  std::vector<double> numeric = num_in;
  numeric.insert(numeric.end(), num_out.begin(), num_out.end());
  return oracle::max_relative_error(flatten(analytic.input, analytic.output), numeric);
}

}  // namespace

TEST_CASE("context_mean examples") {
  CbowModel model;
  model.input = Matrix(2, 2);
  model.output = Matrix(2, 2);
  model.input(0, 0) = 1.0;
  model.input(1, 1) = 1.0;
  ContextWindow w{.center = 0, .context = {0}, .radius = 1};
  CHECK(*context_mean(model, w) == std::vector<double>{1.0, 0.0});
  w.context = {0, 1};
  CHECK(*context_mean(model, w) == std::vector<double>{0.5, 0.5});
  w.context = {0, 0};
  CHECK(*context_mean(model, w) == std::vector<double>{1.0, 0.0});
  w.context.clear();
  CHECK_FALSE(context_mean(model, w).has_value());
}

TEST_CASE("loss_exact examples") {
  CbowModel two;
  two.input = Matrix(2, 3);
  two.output = Matrix(2, 3);
  const ContextWindow w{.center = 0, .context = {1}, .radius = 1};
  CHECK(loss_exact(two, w) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  CbowModel one;
  one.input = Matrix(1, 2, 0.3);
  one.output = Matrix(1, 2, -0.7);
  const ContextWindow self{.center = 0, .context = {0}, .radius = 1};
  CHECK(loss_exact(one, self) == 0.0);

  // Logits (2, 0, 0): h = (1, 0) and output rows (2,0), (0,0), (0,0).
  CbowModel three;
  three.input = Matrix(3, 2);
  three.output = Matrix(3, 2);
  three.input(1, 0) = 1.0;
  three.output(0, 0) = 2.0;
  const ContextWindow w3{.center = 0, .context = {1}, .radius = 1};
  CHECK(loss_exact(three, w3) == doctest::Approx(0.239544766221884504868922893154).epsilon(1e-14));
}

TEST_CASE("exact softmax sums to one and loss is nonnegative") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t vocab = 1 + uniform_index(rng, 8);
    auto model = random_model(rng, vocab, 1 + uniform_index(rng, 5), 3.0);
    const auto w = random_window(rng, vocab);
    const auto p = softmax_exact(model, w);
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9);
    CHECK(loss_exact(model, w) >= 0.0);
  }
}

TEST_CASE("exact gradient matches finite differences") {
  Rng rng(2);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t vocab = 1 + uniform_index(rng, 8);
    auto model = random_model(rng, vocab, 1 + uniform_index(rng, 5));
    const auto w = random_window(rng, vocab);
    const auto analytic = gradient_exact(model, w);
    const double err = fd_error(model, [&] { return loss_exact(model, w); }, analytic);
    CHECK(err <= 1e-4);
  }
}

TEST_CASE("negative-sampling gradient matches finite differences") {
  Rng rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t vocab = 2 + uniform_index(rng, 7);
    auto model = random_model(rng, vocab, 1 + uniform_index(rng, 5));
    const auto w = random_window(rng, vocab);
    std::vector<WordId> negatives;
    const std::size_t k = 1 + uniform_index(rng, 5);
    while (negatives.size() < k) {
      const auto id = static_cast<WordId>(uniform_index(rng, vocab));
      if (id != w.center) negatives.push_back(id);
    }
    const auto analytic = gradient_negative(model, w, negatives);
    const double err =
        fd_error(model, [&] { return loss_negative(model, w, negatives); }, analytic);
    CHECK(err <= 1e-4);
  }
}

TEST_CASE("repeated exact steps on one window strictly decrease the loss") {
  Rng rng(4);
  auto model = random_model(rng, 5, 3, 0.5);
  const ContextWindow w{.center = 2, .context = {0, 1, 3, 4}, .radius = 2};
  double previous = loss_exact(model, w);
  for (int step = 0; step < 100; ++step) {
    const auto pre = sgd_step_exact(model, w, 0.05);
    REQUIRE(pre.has_value());
    CHECK(*pre == previous);
    const double now = loss_exact(model, w);
    CHECK(now < previous);
    previous = now;
  }
}

TEST_CASE("zero learning rate leaves the model unchanged") {
  Rng rng(5);
  auto model = random_model(rng, 4, 3);
  const auto before = model;
  const ContextWindow w{.center = 1, .context = {0, 2}, .radius = 1};
  const auto loss = sgd_step_exact(model, w, 0.0);
  REQUIRE(loss.has_value());
  CHECK(*loss == loss_exact(before, w));
  CHECK(model.input == before.input);
  CHECK(model.output == before.output);
  const std::vector<WordId> negs = {3};
  sgd_step_negative(model, w, 0.0, negs);
  CHECK(model.input == before.input);
  CHECK(model.output == before.output);
}

TEST_CASE("empty context windows are skipped") {
  Rng rng(6);
  auto model = random_model(rng, 3, 2);
  const auto before = model;
  const ContextWindow w{.center = 1, .context = {}, .radius = 1};
  CHECK_FALSE(sgd_step_exact(model, w, 0.1).has_value());
  CHECK(model.input == before.input);
}

TEST_CASE("exact loss is invariant under joint permutation of ids and rows") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t vocab = 2 + uniform_index(rng, 7);
    const std::size_t dim = 1 + uniform_index(rng, 5);
    auto model = random_model(rng, vocab, dim);
    const auto w = random_window(rng, vocab);
    std::vector<WordId> perm(vocab);
    std::iota(perm.begin(), perm.end(), 0u);
    shuffle(std::span<WordId>(perm), rng);
    CbowModel permuted;
    permuted.input = Matrix(vocab, dim);
    permuted.output = Matrix(vocab, dim);
    for (std::size_t r = 0; r < vocab; ++r) {
      std::copy_n(model.input.row(r).begin(), dim, permuted.input.row(perm[r]).begin());
      std::copy_n(model.output.row(r).begin(), dim, permuted.output.row(perm[r]).begin());
    }
    ContextWindow pw = w;
    pw.center = perm[w.center];
    for (auto& c : pw.context) c = perm[c];
    CHECK(loss_exact(permuted, pw) == doctest::Approx(loss_exact(model, w)).epsilon(1e-12));
  }
}

TEST_CASE("negative draws never return the center") {
  const std::vector<std::uint64_t> freqs = {10, 5, 1, 1};
  const NoiseSampler sampler(freqs);
  double mass = 0.0;
  for (WordId id = 0; id < 4; ++id) mass += sampler.probability(id);
  CHECK(mass == doctest::Approx(1.0));
  CHECK(sampler.probability(0) / sampler.probability(2) ==
        doctest::Approx(std::pow(10.0, 0.75)));
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const auto negs = draw_negatives(0, 3, sampler, rng);
    CHECK(negs.size() <= 3);
    for (auto id : negs) CHECK(id != 0);
  }
}

TEST_CASE("a negative equal to the center is redrawn once then dropped") {
  // All noise mass on the center: both the draw and the redraw hit it.
  const std::vector<std::uint64_t> freqs = {7, 0, 0};
  const NoiseSampler sampler(freqs);
  Rng rng(9);
  CHECK(draw_negatives(0, 1, sampler, rng).empty());
  CHECK(draw_negatives(1, 2, sampler, rng) == std::vector<WordId>{0, 0});
  CHECK_THROWS_AS(draw_negatives(0, 0, sampler, rng), Error);
}

TEST_CASE("single-threaded training is bit-reproducible") {
  const auto corpus = synthetic::two_topic_corpus(40, 12, 1);
  std::vector<Token> flat;
  for (const auto& s : corpus) flat.insert(flat.end(), s.begin(), s.end());
  const auto vocab = build_vocabulary(flat, 1);
  const auto ids = vocab.encode(corpus);
  for (std::uint32_t negatives : {0u, 3u}) {
    const CbowConfig config{.dim = 8, .radius = 2, .epochs = 1, .negatives = negatives, .seed = 42};
    const auto a = train_cbow(ids, vocab, config);
    const auto b = train_cbow(ids, vocab, config);
    CHECK(a.embeddings == b.embeddings);
    CHECK(a.epoch_losses == b.epoch_losses);
    const auto c = train_cbow(ids, vocab, CbowConfig{.dim = 8, .radius = 2, .epochs = 1,
                                                     .negatives = negatives, .seed = 43});
    CHECK_FALSE(c.embeddings == a.embeddings);
  }
}

TEST_CASE("initialization ranges") {
  const auto model = CbowModel::initialize(20, 10, 5, 1);
  for (double v : model.input.values()) CHECK(std::abs(v) <= 0.05);
  for (double v : model.output.values()) CHECK(v == 0.0);
}

TEST_CASE("zero epochs return the initialization") {
  const auto corpus = synthetic::two_topic_corpus(10, 6, 2);
  std::vector<Token> flat;
  for (const auto& s : corpus) flat.insert(flat.end(), s.begin(), s.end());
  const auto vocab = build_vocabulary(flat, 1);
  const auto ids = vocab.encode(corpus);
  const CbowConfig config{.dim = 6, .radius = 2, .epochs = 0, .seed = 5};
  const auto result = train_cbow(ids, vocab, config);
  CHECK(result.epoch_losses.empty());
  const auto init = CbowModel::initialize(vocab.size(), 6, 2, derive_seed(5, 0xCB0));
  CHECK(result.embeddings.vectors() == init.input);
}

TEST_CASE("empty corpus is an error") {
  const std::vector<Token> flat = {"a"};
  const auto vocab = build_vocabulary(flat, 1);
  const std::vector<IdSegment> none;
  CHECK_THROWS_AS(train_cbow(none, vocab, CbowConfig{.dim = 4}), Error);
}

namespace {

void check_topics(const EmbeddingMatrix& emb) {
  double intra = 0.0, inter = 0.0;
  int n_intra = 0, n_inter = 0;
  for (std::size_t i = 0; i < emb.size(); ++i) {
    for (std::size_t j = i + 1; j < emb.size(); ++j) {
      const double c = cosine(emb.vector(i), emb.vector(j));
      if (emb.word(i)[0] == emb.word(j)[0]) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  CHECK(intra / n_intra > inter / n_inter);
}

}  // namespace

TEST_CASE("two-topic corpus separates topics and epoch loss decreases") {
  const auto corpus = synthetic::two_topic_corpus(200, 10, 3);
  std::vector<Token> flat;
  for (const auto& s : corpus) flat.insert(flat.end(), s.begin(), s.end());
  const auto vocab = build_vocabulary(flat, 1);
  const auto ids = vocab.encode(corpus);
  for (std::uint32_t negatives : {0u, 5u}) {
    const CbowConfig config{.dim = 16, .radius = 2, .lr0 = 0.05, .epochs = 8,
                            .negatives = negatives, .seed = 7};
    const auto result = train_cbow(ids, vocab, config);
    check_topics(result.embeddings);
    REQUIRE(result.epoch_losses.size() == 8);
    for (std::size_t e = 1; e < result.epoch_losses.size(); ++e) {
      CHECK(result.epoch_losses[e] <= 1.02 * result.epoch_losses[e - 1]);
    }
  }
}

TEST_CASE("multi-threaded training stays finite and learns topics") {
  const auto corpus = synthetic::two_topic_corpus(400, 10, 4);
  std::vector<Token> flat;
  for (const auto& s : corpus) flat.insert(flat.end(), s.begin(), s.end());
  const auto vocab = build_vocabulary(flat, 1);
  const auto ids = vocab.encode(corpus);
  const CbowConfig config{.dim = 16, .radius = 2, .epochs = 5, .negatives = 5, .seed = 7,
                          .threads = 4};
  const auto result = train_cbow(ids, vocab, config);
  CHECK(all_finite(result.embeddings.vectors().values()));
  check_topics(result.embeddings);
}
