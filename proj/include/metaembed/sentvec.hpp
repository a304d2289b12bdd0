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

#ifndef METAEMBED_SENTVEC_HPP_
#define METAEMBED_SENTVEC_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metaembed/corpus.hpp"
#include "metaembed/embeddings.hpp"

namespace metaembed {

enum class Aggregation { kMean, kSum };

struct SentenceVector {
  std::vector<double> values;
  Label label = Label::kLiteral;
  std::size_t covered = 0;  // tokens found in the embedding vocabulary
  std::size_t total = 0;
};

// Mean or sum of the in-vocabulary token vectors. Out-of-vocabulary tokens
// are skipped and counted, never zero-filled. nullopt when no token is
// covered.
std::optional<SentenceVector> aggregate(const LabeledPhrase& phrase,
                                        const EmbeddingMatrix& embeddings,
                                        Aggregation mode = Aggregation::kMean);

struct CoverageReport {
  std::size_t literal = 0;
  std::size_t metaphor = 0;
  // Mean covered/total over the embedded phrases.
  double mean_coverage = 0.0;
  // Input indices of phrases with no covered token.
  std::vector<std::size_t> excluded;
};

struct EmbeddedDataset {
  std::vector<SentenceVector> vectors;
  CoverageReport report;
};

// Throws kEmptyInput for an empty list and when every phrase is uncoverable.
EmbeddedDataset embed_dataset(std::span<const LabeledPhrase> phrases,
                              const EmbeddingMatrix& embeddings,
                              Aggregation mode = Aggregation::kMean);

// One line per vector: `<label> <covered>/<total> <v1> ... <vD>`.
void write_sentence_vectors(std::ostream& out, std::span<const SentenceVector> vectors);
void save_sentence_vectors(const std::filesystem::path& path,
                           std::span<const SentenceVector> vectors);
std::vector<SentenceVector> load_sentence_vectors(const std::filesystem::path& path);

std::optional<Aggregation> parse_aggregation(std::string_view text);

}  // namespace metaembed

#endif  // METAEMBED_SENTVEC_HPP_
