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

#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "metaembed/error.hpp"
#include "metaembed/random.hpp"
#include "metaembed/sentvec.hpp"

namespace fs = std::filesystem;
using namespace metaembed;

namespace {

EmbeddingMatrix small_embeddings() {
  Matrix m(3, 2);
  m(0, 0) = 1.0;  // a
  m(1, 1) = 1.0;  // b
  m(2, 0) = 3.0;  // c
  m(2, 1) = 3.0;
  return EmbeddingMatrix({"a", "b", "c"}, std::move(m));
}

LabeledPhrase phrase(std::vector<Token> tokens, Label label = Label::kLiteral) {
  LabeledPhrase p;
  p.verb = tokens.front();
  p.tokens = std::move(tokens);
  p.label = label;
  return p;
}

}  // namespace

TEST_CASE("aggregate examples") {
  Matrix m(1, 2);
  m(0, 0) = 2.0;
  m(0, 1) = 4.0;
  const EmbeddingMatrix single({"a"}, m);
  const auto one = aggregate(phrase({"a"}), single);
  REQUIRE(one);
  CHECK(one->values == std::vector<double>{2.0, 4.0});

  const auto emb = small_embeddings();
  const auto mean = aggregate(phrase({"a", "b"}, Label::kMetaphor), emb, Aggregation::kMean);
  CHECK(mean->values == std::vector<double>{0.5, 0.5});
  CHECK(mean->label == Label::kMetaphor);
  const auto sum = aggregate(phrase({"a", "b"}), emb, Aggregation::kSum);
  CHECK(sum->values == std::vector<double>{1.0, 1.0});

  const auto skip = aggregate(phrase({"c", "zzz"}), emb);
  CHECK(skip->values == std::vector<double>{3.0, 3.0});
  CHECK(skip->covered == 1);
  CHECK(skip->total == 2);

  CHECK_FALSE(aggregate(phrase({"zzz", "yyy"}), emb).has_value());
}

TEST_CASE("embed_dataset partitions by class") {
  const auto emb = small_embeddings();
  std::vector<LabeledPhrase> phrases;
  for (int k = 0; k < 459; ++k) phrases.push_back(phrase({"a", "c"}, Label::kLiteral));
  for (int k = 0; k < 455; ++k) phrases.push_back(phrase({"b"}, Label::kMetaphor));
  const auto data = embed_dataset(phrases, emb);
  CHECK(data.vectors.size() == 914);
  CHECK(data.report.literal == 459);
  CHECK(data.report.metaphor == 455);
  CHECK(data.report.excluded.empty());
  CHECK(data.report.mean_coverage == 1.0);
}

TEST_CASE("embed_dataset reports uncoverable phrases") {
  const auto emb = small_embeddings();
  const std::vector<LabeledPhrase> phrases = {
      phrase({"a"}), phrase({"nope"}, Label::kMetaphor), phrase({"b", "nope"}, Label::kMetaphor)};
  const auto data = embed_dataset(phrases, emb);
  CHECK(data.vectors.size() == 2);
  CHECK(data.report.excluded == std::vector<std::size_t>{1});
  CHECK(data.report.literal == 1);
  CHECK(data.report.metaphor == 1);
  CHECK(data.report.mean_coverage == doctest::Approx(0.75));

  const std::vector<LabeledPhrase> none;
  CHECK_THROWS_AS(embed_dataset(none, emb), Error);
  const std::vector<LabeledPhrase> all_oov = {phrase({"x"}), phrase({"y"})};
  CHECK_THROWS_AS(embed_dataset(all_oov, emb), Error);
}

TEST_CASE("aggregation invariants") {
  Rng rng(1);
  Matrix m(6, 4);
  for (double& v : m.values()) v = uniform(rng, -2.0, 2.0);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "f"};
  const EmbeddingMatrix emb(words, m);
  Matrix scaled_m = m;
  const double s = 2.5;
  for (double& v : scaled_m.values()) v *= s;
  const EmbeddingMatrix scaled(words, scaled_m);

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Token> p1, p2;
    const std::size_t n1 = 1 + uniform_index(rng, 5);
    const std::size_t n2 = 1 + uniform_index(rng, 5);
    for (std::size_t k = 0; k < n1; ++k) p1.push_back(words[uniform_index(rng, 6)]);
    for (std::size_t k = 0; k < n2; ++k) p2.push_back(words[uniform_index(rng, 6)]);

    // Duplicating every token the same number of times keeps the mean.
    std::vector<Token> tripled;
    for (int r = 0; r < 3; ++r) tripled.insert(tripled.end(), p1.begin(), p1.end());
    const auto mean1 = aggregate(phrase(p1), emb)->values;
    const auto mean3 = aggregate(phrase(tripled), emb)->values;
    for (std::size_t d = 0; d < 4; ++d) CHECK(mean3[d] == doctest::Approx(mean1[d]).epsilon(1e-12));

    // Sum mode is additive over concatenation.
    std::vector<Token> joined = p1;
    joined.insert(joined.end(), p2.begin(), p2.end());
    const auto s1 = aggregate(phrase(p1), emb, Aggregation::kSum)->values;
    const auto s2 = aggregate(phrase(p2), emb, Aggregation::kSum)->values;
    const auto s12 = aggregate(phrase(joined), emb, Aggregation::kSum)->values;
    for (std::size_t d = 0; d < 4; ++d) CHECK(s12[d] == doctest::Approx(s1[d] + s2[d]).epsilon(1e-12));

    // Scaling the embeddings scales the output.
    const auto scaled_mean = aggregate(phrase(p1), scaled)->values;
    for (std::size_t d = 0; d < 4; ++d) {
      CHECK(scaled_mean[d] == doctest::Approx(s * mean1[d]).epsilon(1e-12));
    }
  }
}

TEST_CASE("sentence vector file round trip") {
  const auto emb = small_embeddings();
  const std::vector<LabeledPhrase> phrases = {phrase({"a", "zzz"}), phrase({"c"}, Label::kMetaphor)};
  const auto data = embed_dataset(phrases, emb);
  const auto path = fs::temp_directory_path() / "metaembed_sentvecs.txt";
  save_sentence_vectors(path, data.vectors);
  {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "literal 1/2 1 0");
  }
  const auto loaded = load_sentence_vectors(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].values == data.vectors[0].values);
  CHECK(loaded[1].label == Label::kMetaphor);
  CHECK(loaded[0].covered == 1);
  CHECK(loaded[0].total == 2);
  {
    std::ofstream out(path);
    out << "literal 3/2 1 0\n";
  }
  CHECK_THROWS_AS(load_sentence_vectors(path), Error);
  fs::remove(path);
}

TEST_CASE("parse_aggregation") {
  CHECK(parse_aggregation("mean") == Aggregation::kMean);
  CHECK(parse_aggregation("sum") == Aggregation::kSum);
  CHECK_FALSE(parse_aggregation("max").has_value());
}
