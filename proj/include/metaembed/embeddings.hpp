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

#ifndef METAEMBED_EMBEDDINGS_HPP_
#define METAEMBED_EMBEDDINGS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "metaembed/matrix.hpp"

namespace metaembed {

// Trained word vectors, one row per word.
//
// Text format: a `<V> <D>` header line, then `<word> <v1> ... <vD>` per
// word in row order. Values are written in shortest round-trip form, so a
// save/load cycle is lossless.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::vector<std::string> words, Matrix vectors);

  static EmbeddingMatrix load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;

  std::size_t size() const noexcept { return words_.size(); }
  std::size_t dim() const noexcept { return vectors_.cols(); }
  const std::string& word(std::size_t row) const { return words_.at(row); }
  std::optional<std::size_t> find(std::string_view word) const;

  std::span<const double> vector(std::size_t row) const { return vectors_.row(row); }
  const Matrix& vectors() const noexcept { return vectors_; }
  Matrix& mutable_vectors() noexcept { return vectors_; }

  bool operator==(const EmbeddingMatrix& other) const {
    return words_ == other.words_ && vectors_ == other.vectors_;
  }

 private:
  std::vector<std::string> words_;
  Matrix vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TrainingResult {
  EmbeddingMatrix embeddings;
  // Mean per-window loss (CBOW) or total weighted loss (GloVe) per epoch.
  std::vector<double> epoch_losses;
};

}  // namespace metaembed

#endif  // METAEMBED_EMBEDDINGS_HPP_
