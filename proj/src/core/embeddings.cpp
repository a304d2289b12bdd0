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

#include "metaembed/embeddings.hpp"

#include <istream>
#include <ostream>

#include "metaembed/error.hpp"
#include "metaembed/text_io.hpp"

namespace metaembed {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> words, Matrix vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (words_.size() != vectors_.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "word count does not match matrix rows");
  }
  index_.reserve(words_.size());
  for (std::size_t r = 0; r < words_.size(); ++r) {
    if (!index_.emplace(words_[r], r).second) {
      throw Error(ErrorCode::kFormat, "duplicate embedding word '" + words_[r] + "'");
    }
  }
}

std::optional<std::size_t> EmbeddingMatrix::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingMatrix::write(std::ostream& out) const {
  out << size() << ' ' << dim() << '\n';
  for (std::size_t r = 0; r < size(); ++r) {
    out << words_[r];
    for (double v : vectors_.row(r)) out << ' ' << format_double(v);
    out << '\n';
  }
}

void EmbeddingMatrix::save(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path);
  write(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

EmbeddingMatrix EmbeddingMatrix::load(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  auto where = [&](std::size_t line_no) {
    return path.string() + ":" + std::to_string(line_no) + ": ";
  };
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kFormat, where(1) + "missing '<V> <D>' header");
  }
  const auto header = split_fields(chomp(line));
  if (header.size() != 2) {
    throw Error(ErrorCode::kFormat, where(1) + "expected '<V> <D>' header");
  }
  const std::size_t rows = parse_uint(header[0], "V");
  const std::size_t cols = parse_uint(header[1], "D");
  if (cols == 0) throw Error(ErrorCode::kFormat, where(1) + "D must be positive");

  std::vector<std::string> words;
  words.reserve(rows);
  Matrix vectors(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::kFormat, where(r + 2) + "expected " + std::to_string(rows) +
                                          " vectors, file ends early");
    }
    const auto fields = split_fields(chomp(line));
    if (fields.size() != cols + 1) {
      throw Error(ErrorCode::kFormat, where(r + 2) + "expected word and " +
                                          std::to_string(cols) + " values");
    }
    words.emplace_back(fields[0]);
    for (std::size_t c = 0; c < cols; ++c) {
      vectors(r, c) = parse_double(fields[c + 1], "embedding value");
    }
  }
  return EmbeddingMatrix(std::move(words), std::move(vectors));
}

}  // namespace metaembed
