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

#include "metaembed/corpus.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <istream>
#include <ostream>
#include <thread>

#include "metaembed/error.hpp"
#include "metaembed/text_io.hpp"

namespace metaembed {
namespace {

void require_valid_utf8(std::string_view text, std::size_t base_offset) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t pos = 0;
  while (pos < length) {
    const int32_t start = pos;
    UChar32 c;
    U8_NEXT(bytes, pos, length, c);
    if (c < 0) {
      throw Error(ErrorCode::kEncoding,
                  "invalid UTF-8 at byte offset " +
                      std::to_string(base_offset + static_cast<std::size_t>(start)));
    }
  }
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || normalizer == nullptr) {
    throw Error(ErrorCode::kEncoding, "ICU NFC normalizer unavailable");
  }
  return *normalizer;
}

icu::UnicodeString normalize(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(text, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kEncoding, "NFC normalization failed");
  }
  return out;
}

bool starts_token(UChar32 c) {
  return (U_GET_GC_MASK(c) & (U_GC_L_MASK | U_GC_ND_MASK)) != 0;
}

bool continues_token(UChar32 c) {
  return (U_GET_GC_MASK(c) & (U_GC_L_MASK | U_GC_ND_MASK | U_GC_M_MASK)) != 0;
}

bool has_whitespace(std::string_view word) {
  return word.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

}  // namespace

std::vector<Token> tokenize(std::string_view utf8, std::size_t base_offset) {
  require_valid_utf8(utf8, base_offset);
  std::vector<Token> tokens;
  if (utf8.empty()) return tokens;

  icu::UnicodeString text = normalize(icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size()))));
  text.toLower(icu::Locale::getRoot());
  // Case mapping can leave decomposed sequences behind.
  text = normalize(text);

  icu::UnicodeString current;
  auto flush = [&] {
    if (current.isEmpty()) return;
    std::string word;
    current.toUTF8String(word);
    tokens.push_back(std::move(word));
    current.remove();
  };
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    if (current.isEmpty() ? starts_token(c) : continues_token(c)) {
      current.append(c);
    } else {
      flush();
    }
    i += U16_LENGTH(c);
  }
  flush();
  return tokens;
}

std::vector<Segment> load_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, /*binary=*/true);
  std::vector<Segment> segments;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    std::vector<Token> tokens = tokenize(line, offset);
    offset += line.size() + 1;
    if (!tokens.empty()) segments.push_back(std::move(tokens));
  }
  return segments;
}

TokenCounts count_tokens(std::span<const Segment> segments, unsigned threads) {
  threads = std::max(1u, std::min<unsigned>(threads, segments.size() ? segments.size() : 1));
  std::vector<TokenCounts> partial(threads);
  auto count_range = [&](unsigned worker) {
    const std::size_t begin = segments.size() * worker / threads;
    const std::size_t end = segments.size() * (worker + 1) / threads;
    for (std::size_t s = begin; s < end; ++s) {
      for (const Token& token : segments[s]) ++partial[worker][token];
    }
  };
  if (threads == 1) {
    count_range(0);
    return std::move(partial[0]);
  }
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(count_range, w);
  }
  TokenCounts merged = std::move(partial[0]);
  for (unsigned w = 1; w < threads; ++w) {
    for (const auto& [token, n] : partial[w]) merged[token] += n;
  }
  return merged;
}

Vocabulary Vocabulary::build(const TokenCounts& counts, std::uint64_t min_count) {
  if (min_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "min_count must be positive");
  }
  std::vector<Entry> entries;
  for (const auto& [word, n] : counts) {
    if (n >= min_count) entries.push_back({word, n});
  }
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary,
                "no token reaches min_count " + std::to_string(min_count));
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.freq != b.freq) return a.freq > b.freq;
    return a.word < b.word;
  });
  return from_entries(std::move(entries));
}

Vocabulary Vocabulary::from_entries(std::vector<Entry> entries) {
  if (entries.size() > UINT32_MAX) {
    throw Error(ErrorCode::kInvalidArgument, "vocabulary exceeds 2^32 words");
  }
  Vocabulary vocab;
  vocab.index_.reserve(entries.size());
  for (std::size_t id = 0; id < entries.size(); ++id) {
    const Entry& e = entries[id];
    if (e.word.empty() || has_whitespace(e.word)) {
      throw Error(ErrorCode::kFormat, "invalid vocabulary word at id " +
                                          std::to_string(id));
    }
    if (!vocab.index_.emplace(e.word, static_cast<WordId>(id)).second) {
      throw Error(ErrorCode::kFormat, "duplicate vocabulary word '" + e.word + "'");
    }
  }
  vocab.entries_ = std::move(entries);
  return vocab;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = chomp(line);
    if (view.empty()) continue;
    const auto fields = split_fields(view);
    if (fields.size() != 2) {
      throw Error(ErrorCode::kFormat, path.string() + ":" + std::to_string(line_no) +
                                          ": expected '<word> <frequency>'");
    }
    entries.push_back({std::string(fields[0]), parse_uint(fields[1], "frequency")});
  }
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "empty vocabulary file: " + path.string());
  }
  return from_entries(std::move(entries));
}

void Vocabulary::write(std::ostream& out) const {
  for (const Entry& e : entries_) out << e.word << ' ' << e.freq << '\n';
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path);
  write(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint64_t> Vocabulary::frequencies() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back(e.freq);
  return out;
}

IdSegment Vocabulary::encode(std::span<const Token> tokens) const {
  IdSegment ids;
  ids.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (auto id = find(t)) ids.push_back(*id);
  }
  return ids;
}

std::vector<IdSegment> Vocabulary::encode(std::span<const Segment> segments) const {
  std::vector<IdSegment> out;
  out.reserve(segments.size());
  for (const Segment& s : segments) {
    IdSegment ids = encode(std::span<const Token>(s));
    if (!ids.empty()) out.push_back(std::move(ids));
  }
  return out;
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].word != other.entries_[i].word ||
        entries_[i].freq != other.entries_[i].freq) {
      return false;
    }
  }
  return true;
}

Vocabulary build_vocabulary(std::span<const Token> tokens, std::uint64_t min_count) {
  TokenCounts counts;
  for (const Token& t : tokens) ++counts[t];
  return Vocabulary::build(counts, min_count);
}

std::string_view label_name(Label label) {
  return label == Label::kMetaphor ? "metaphor" : "literal";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "literal") return Label::kLiteral;
  if (text == "metaphor") return Label::kMetaphor;
  return std::nullopt;
}

std::vector<LabeledPhrase> parse_labeled_phrases(std::istream& in,
                                                 std::string_view source) {
  std::vector<LabeledPhrase> phrases;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  auto fail = [&](const std::string& message) {
    throw Error(ErrorCode::kFormat,
                std::string(source) + ":" + std::to_string(line_no) + ": " + message);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    const std::string_view view = chomp(line);
    if (view.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::size_t tab1 = view.find('\t');
    if (tab1 == std::string_view::npos) fail("missing verb column");
    const std::size_t tab2 = view.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) fail("missing sentence column");

    const std::string_view label_text = view.substr(0, tab1);
    const auto label = parse_label(label_text);
    if (!label) fail("unknown label '" + std::string(label_text) + "'");

    LabeledPhrase phrase;
    phrase.label = *label;
    std::vector<Token> verb_tokens;
    try {
      verb_tokens = tokenize(view.substr(tab1 + 1, tab2 - tab1 - 1),
                             line_offset + tab1 + 1);
      phrase.tokens = tokenize(view.substr(tab2 + 1), line_offset + tab2 + 1);
    } catch (const Error& e) {
      fail(e.what());
    }
    if (verb_tokens.empty()) fail("missing verb column");
    if (verb_tokens.size() != 1) fail("verb column must hold a single token");
    if (phrase.tokens.empty()) fail("empty sentence");
    phrase.verb = std::move(verb_tokens.front());
    if (std::find(phrase.tokens.begin(), phrase.tokens.end(), phrase.verb) ==
        phrase.tokens.end()) {
      fail("verb '" + phrase.verb + "' does not occur in the sentence");
    }
    phrases.push_back(std::move(phrase));
  }
  return phrases;
}

std::vector<LabeledPhrase> load_labeled_phrases(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, /*binary=*/true);
  return parse_labeled_phrases(in, path.string());
}

LabelCounts count_labels(std::span<const LabeledPhrase> phrases) {
  LabelCounts counts;
  for (const LabeledPhrase& p : phrases) {
    if (p.label == Label::kMetaphor) {
      ++counts.metaphor;
    } else {
      ++counts.literal;
    }
  }
  return counts;
}

}  // namespace metaembed
