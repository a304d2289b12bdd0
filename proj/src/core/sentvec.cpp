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

#include "metaembed/sentvec.hpp"

#include <istream>
#include <ostream>

#include "metaembed/error.hpp"
#include "metaembed/text_io.hpp"

namespace metaembed {

std::optional<SentenceVector> aggregate(const LabeledPhrase& phrase,
                                        const EmbeddingMatrix& embeddings,
                                        Aggregation mode) {
  SentenceVector out;
  out.label = phrase.label;
  out.total = phrase.tokens.size();
  out.values.assign(embeddings.dim(), 0.0);
  for (const Token& token : phrase.tokens) {
    const auto row = embeddings.find(token);
    if (!row) continue;
    ++out.covered;
    const auto v = embeddings.vector(*row);
    for (std::size_t k = 0; k < v.size(); ++k) out.values[k] += v[k];
  }
  if (out.covered == 0) return std::nullopt;
  if (mode == Aggregation::kMean) {
    const double inv = 1.0 / static_cast<double>(out.covered);
    for (double& x : out.values) x *= inv;
  }
  return out;
}

EmbeddedDataset embed_dataset(std::span<const LabeledPhrase> phrases,
                              const EmbeddingMatrix& embeddings, Aggregation mode) {
  if (phrases.empty()) throw Error(ErrorCode::kEmptyInput, "no phrases to embed");
  EmbeddedDataset data;
  double coverage = 0.0;
  for (std::size_t p = 0; p < phrases.size(); ++p) {
    auto vec = aggregate(phrases[p], embeddings, mode);
    if (!vec) {
      data.report.excluded.push_back(p);
      continue;
    }
    coverage += static_cast<double>(vec->covered) / static_cast<double>(vec->total);
    if (vec->label == Label::kMetaphor) {
      ++data.report.metaphor;
    } else {
      ++data.report.literal;
    }
    data.vectors.push_back(std::move(*vec));
  }
  if (data.vectors.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no phrase has a token in the embedding vocabulary");
  }
  data.report.mean_coverage = coverage / static_cast<double>(data.vectors.size());
  return data;
}

void write_sentence_vectors(std::ostream& out, std::span<const SentenceVector> vectors) {
  for (const SentenceVector& v : vectors) {
    out << label_name(v.label) << ' ' << v.covered << '/' << v.total;
    for (double x : v.values) out << ' ' << format_double(x);
    out << '\n';
  }
}

void save_sentence_vectors(const std::filesystem::path& path,
                           std::span<const SentenceVector> vectors) {
  std::ofstream out = open_output(path);
  write_sentence_vectors(out, vectors);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<SentenceVector> load_sentence_vectors(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<SentenceVector> vectors;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& message) {
    throw Error(ErrorCode::kFormat,
                path.string() + ":" + std::to_string(line_no) + ": " + message);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(chomp(line));
    if (fields.empty()) continue;
    if (fields.size() < 3) fail("expected '<label> <covered>/<total> <values...>'");
    SentenceVector v;
    const auto label = parse_label(fields[0]);
    if (!label) fail("unknown label '" + std::string(fields[0]) + "'");
    v.label = *label;
    const std::size_t slash = fields[1].find('/');
    if (slash == std::string_view::npos) fail("coverage must be '<covered>/<total>'");
    try {
      v.covered = parse_uint(fields[1].substr(0, slash), "covered");
      v.total = parse_uint(fields[1].substr(slash + 1), "total");
      for (std::size_t k = 2; k < fields.size(); ++k) {
        v.values.push_back(parse_double(fields[k], "vector value"));
      }
    } catch (const Error& e) {
      fail(e.what());
    }
    if (v.covered == 0 || v.covered > v.total) fail("coverage out of range");
    if (!vectors.empty() && vectors.front().values.size() != v.values.size()) {
      fail("dimension differs from the first line");
    }
    vectors.push_back(std::move(v));
  }
  return vectors;
}

std::optional<Aggregation> parse_aggregation(std::string_view text) {
  if (text == "mean") return Aggregation::kMean;
  if (text == "sum") return Aggregation::kSum;
  return std::nullopt;
}

}  // namespace metaembed
