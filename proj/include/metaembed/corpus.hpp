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

#ifndef METAEMBED_CORPUS_HPP_
#define METAEMBED_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace metaembed {

// A token is an NFC-normalized, lowercased, non-empty run of letters and
// digits (combining marks may continue a run).
using Token = std::string;
using WordId = std::uint32_t;

// A tokenized corpus line. Context windows never cross segment boundaries.
using Segment = std::vector<Token>;
using IdSegment = std::vector<WordId>;

// Splits UTF-8 text into tokens. Invalid UTF-8 throws Error(kEncoding) whose
// message names the byte offset, counted from `base_offset`.
std::vector<Token> tokenize(std::string_view utf8, std::size_t base_offset = 0);

// Reads a raw corpus file, one segment per non-blank line.
std::vector<Segment> load_corpus(const std::filesystem::path& path);

using TokenCounts = std::unordered_map<Token, std::uint64_t>;

// Counts tokens over segments. Partial counts of `threads` contiguous
// partitions are merged; integer counts make the result independent of the
// partitioning.
TokenCounts count_tokens(std::span<const Segment> segments,
                         unsigned threads = 1);

class Vocabulary {
 public:
  struct Entry {
    Token word;
    std::uint64_t freq;
  };

  Vocabulary() = default;

  // Retains words with count >= min_count; ids by descending frequency, ties
  // by byte-wise order of the word. Throws kEmptyVocabulary if none survive.
  static Vocabulary build(const TokenCounts& counts, std::uint64_t min_count);

  // Adopts entries in the given id order after validation.
  static Vocabulary from_entries(std::vector<Entry> entries);

  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Token& word(WordId id) const { return entries_.at(id).word; }
  std::uint64_t freq(WordId id) const { return entries_.at(id).freq; }
  std::optional<WordId> find(std::string_view word) const;
  std::span<const Entry> entries() const noexcept { return entries_; }
  std::vector<std::uint64_t> frequencies() const;

  // Maps tokens to ids, dropping out-of-vocabulary tokens.
  IdSegment encode(std::span<const Token> tokens) const;
  std::vector<IdSegment> encode(std::span<const Segment> segments) const;

  bool operator==(const Vocabulary& other) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<Token, WordId> index_;
};

Vocabulary build_vocabulary(std::span<const Token> tokens,
                            std::uint64_t min_count);

enum class Label { kLiteral = 0, kMetaphor = 1 };

std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view text);

struct LabeledPhrase {
  std::vector<Token> tokens;
  Token verb;
  Label label = Label::kLiteral;
};

struct LabelCounts {
  std::size_t literal = 0;
  std::size_t metaphor = 0;
  std::size_t total() const { return literal + metaphor; }
};

// Reads `<label>\t<verb>\t<sentence>` lines; blank lines are skipped. The
// first bad line throws Error(kFormat) tagged `source:line`.
std::vector<LabeledPhrase> parse_labeled_phrases(std::istream& in,
                                                 std::string_view source);
std::vector<LabeledPhrase> load_labeled_phrases(
    const std::filesystem::path& path);

LabelCounts count_labels(std::span<const LabeledPhrase> phrases);

}  // namespace metaembed

#endif  // METAEMBED_CORPUS_HPP_
