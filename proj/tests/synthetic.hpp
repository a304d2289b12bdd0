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

// Seeded synthetic corpora and datasets shared by the tests.
#ifndef METAEMBED_TESTS_SYNTHETIC_HPP_
#define METAEMBED_TESTS_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "metaembed/corpus.hpp"
#include "metaembed/random.hpp"
#include "metaembed/sentvec.hpp"

namespace synthetic {

inline std::vector<std::string> topic_words(char prefix, int n) {
  std::vector<std::string> words;
  for (int k = 1; k <= n; ++k) words.push_back(std::string(1, prefix) + std::to_string(k));
  return words;
}

// Sentences drawn alternately from two disjoint five-word topics.
inline std::vector<metaembed::Segment> two_topic_corpus(std::size_t sentences,
                                                        std::size_t length,
                                                        std::uint64_t seed) {
  const auto a = topic_words('a', 5);
  const auto b = topic_words('b', 5);
  metaembed::Rng rng(seed);
  std::vector<metaembed::Segment> out;
  for (std::size_t s = 0; s < sentences; ++s) {
    const auto& topic = s % 2 == 0 ? a : b;
    metaembed::Segment seg;
    for (std::size_t t = 0; t < length; ++t) {
      seg.push_back(topic[metaembed::uniform_index(rng, topic.size())]);
    }
    out.push_back(std::move(seg));
  }
  return out;
}

// Verbs shared by both families; objects from one of two disjoint families.
struct VerbObjectData {
  std::vector<std::string> corpus_lines;
  std::vector<std::string> phrase_lines;  // label \t verb \t sentence
};

inline VerbObjectData verb_object_data(std::size_t corpus_sentences, std::size_t phrases,
                                       std::uint64_t seed) {
  const auto verbs = topic_words('v', 6);
  const auto lit = topic_words('l', 10);
  const auto met = topic_words('m', 10);
  const auto lit_ctx = topic_words('p', 8);
  const auto met_ctx = topic_words('q', 8);
  metaembed::Rng rng(seed);
  auto pick = [&](const std::vector<std::string>& v) -> const std::string& {
    return v[metaembed::uniform_index(rng, v.size())];
  };
  VerbObjectData data;
  for (std::size_t s = 0; s < corpus_sentences; ++s) {
    const bool metaphor = s % 2 == 1;
    const auto& objects = metaphor ? met : lit;
    const auto& ctx = metaphor ? met_ctx : lit_ctx;
    std::string line = pick(verbs);
    for (int t = 0; t < 7; ++t) line += " " + pick(t % 2 == 0 ? objects : ctx);
    data.corpus_lines.push_back(line);
  }
  for (std::size_t p = 0; p < phrases; ++p) {
    const bool metaphor = p % 2 == 1;
    const std::string verb = pick(verbs);
    std::string sentence = verb + " " + pick(metaphor ? met : lit) + " " +
                           pick(metaphor ? met : lit);
    data.phrase_lines.push_back(std::string(metaphor ? "metaphor" : "literal") + "\t" + verb +
                                "\t" + sentence);
  }
  return data;
}

// Two Gaussian blobs in `dim` dimensions whose means differ by `gap` along
// the first axis.
inline std::vector<metaembed::SentenceVector> blobs(std::size_t per_class, std::size_t dim,
                                                    double gap, double sigma,
                                                    std::uint64_t seed) {
  metaembed::Rng rng(seed);
  std::vector<metaembed::SentenceVector> out;
  for (std::size_t n = 0; n < 2 * per_class; ++n) {
    metaembed::SentenceVector v;
    v.label = n % 2 == 0 ? metaembed::Label::kLiteral : metaembed::Label::kMetaphor;
    v.values.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) v.values[d] = sigma * metaembed::normal(rng);
    if (v.label == metaembed::Label::kMetaphor) v.values[0] += gap;
    v.covered = v.total = 1;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace synthetic

#endif  // METAEMBED_TESTS_SYNTHETIC_HPP_
