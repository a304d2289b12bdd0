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
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "metaembed/corpus.hpp"
#include "metaembed/error.hpp"
#include "metaembed/random.hpp"

namespace fs = std::filesystem;
using namespace metaembed;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("metaembed_corpus_" + name);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

std::string join(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace

TEST_CASE("tokenize examples") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("Η θάλασσα, η θάλασσα.") ==
        std::vector<Token>{"η", "θάλασσα", "η", "θάλασσα"});
  CHECK(tokenize("word2vec 450") == std::vector<Token>{"word2vec", "450"});
  CHECK(tokenize("  ...  \t!") .empty());
}

TEST_CASE("tokenize applies NFC before comparing surfaces") {
  // "é" as e + combining acute, and as the precomposed code point.
  const auto decomposed = tokenize("Cafe\xCC\x81");
  const auto composed = tokenize("caf\xC3\xA9");
  REQUIRE(decomposed.size() == 1);
  CHECK(decomposed == composed);
}

TEST_CASE("tokenize reports the byte offset of invalid UTF-8") {
  const std::string text = "abc \xFF def";
  try {
    tokenize(text);
    FAIL("expected an encoding error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEncoding);
    CHECK(std::string(e.what()).find("byte offset 4") != std::string::npos);
  }
  // Offsets are relative to the caller's base.
  try {
    tokenize("\xC3", 100);
    FAIL("expected an encoding error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("byte offset 100") != std::string::npos);
  }
}

TEST_CASE("tokenize is deterministic and idempotent on its own output") {
  const std::vector<std::string> pieces = {"Ἀθῆναι", "ΤΟΥΣ", "ορίζοντές", "μου", ",", ".",
                                           "x2", "42", "—", "«λόγος»", "Straße", "\t"};
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const std::size_t n = uniform_index(rng, 12);
    for (std::size_t k = 0; k < n; ++k) {
      text += pieces[uniform_index(rng, pieces.size())];
      if (uniform01(rng) < 0.6) text += ' ';
    }
    const auto once = tokenize(text);
    CHECK(tokenize(text) == once);
    CHECK(tokenize(join(once)) == once);
    for (const auto& t : once) {
      CHECK_FALSE(t.empty());
      CHECK(t.find(' ') == std::string::npos);
    }
  }
}

TEST_CASE("build_vocabulary examples") {
  const std::vector<Token> abA = {"a", "b", "a"};
  const auto v1 = build_vocabulary(abA, 1);
  REQUIRE(v1.size() == 2);
  CHECK(v1.word(0) == "a");
  CHECK(v1.freq(0) == 2);
  CHECK(v1.word(1) == "b");
  CHECK(v1.freq(1) == 1);

  const auto v2 = build_vocabulary(abA, 2);
  REQUIRE(v2.size() == 1);
  CHECK(v2.word(0) == "a");

  const std::vector<Token> xy = {"x", "y"};
  CHECK(code_of([&] { build_vocabulary(xy, 3); }) == ErrorCode::kEmptyVocabulary);
  CHECK(code_of([&] { build_vocabulary(xy, 0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("vocabulary ties break by byte order and ids are dense") {
  const std::vector<Token> tokens = {"δ", "b", "a", "c", "c", "b", "δ"};
  const auto v = build_vocabulary(tokens, 1);
  REQUIRE(v.size() == 4);
  CHECK(v.word(0) == "b");
  CHECK(v.word(1) == "c");
  CHECK(v.word(2) == "δ");
  CHECK(v.word(3) == "a");
  for (WordId id = 0; id < v.size(); ++id) {
    CHECK(v.find(v.word(id)) == id);
    CHECK(v.freq(id) >= 1);
  }
  CHECK_FALSE(v.find("zzz").has_value());
}

TEST_CASE("vocabulary save/load round trip") {
  const std::vector<Token> tokens = {"θάλασσα", "η", "η", "πόρτα", "θάλασσα", "η"};
  const auto v = build_vocabulary(tokens, 1);
  const auto path = temp_file("vocab.txt");
  v.save(path);
  const auto loaded = Vocabulary::load(path);
  CHECK(loaded == v);
  for (WordId id = 0; id < v.size(); ++id) {
    CHECK(loaded.word(id) == v.word(id));
    CHECK(loaded.freq(id) == v.freq(id));
  }
  fs::remove(path);
}

TEST_CASE("vocabulary load rejects malformed files") {
  const auto path = temp_file("bad_vocab.txt");
  {
    std::ofstream out(path);
    out << "a 3\na 2\n";
  }
  CHECK(code_of([&] { Vocabulary::load(path); }) == ErrorCode::kFormat);
  {
    std::ofstream out(path);
    out << "a three\n";
  }
  CHECK(code_of([&] { Vocabulary::load(path); }) == ErrorCode::kFormat);
  fs::remove(path);
  CHECK(code_of([&] { Vocabulary::load(path); }) == ErrorCode::kIo);
}

TEST_CASE("threaded counting equals single-threaded counting") {
  Rng rng(11);
  std::vector<Segment> segments;
  for (int s = 0; s < 300; ++s) {
    Segment seg;
    const std::size_t n = 1 + uniform_index(rng, 20);
    for (std::size_t t = 0; t < n; ++t) seg.push_back("w" + std::to_string(uniform_index(rng, 50)));
    segments.push_back(std::move(seg));
  }
  const auto serial = count_tokens(segments, 1);
  for (unsigned threads : {2u, 3u, 8u}) {
    const auto parallel = count_tokens(segments, threads);
    CHECK(parallel == serial);
    std::ostringstream a, b;
    Vocabulary::build(serial, 1).write(a);
    Vocabulary::build(parallel, 1).write(b);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("encode drops out-of-vocabulary tokens") {
  const std::vector<Token> tokens = {"a", "b", "a"};
  const auto v = build_vocabulary(tokens, 2);
  const std::vector<Token> seg = {"b", "a", "c", "a"};
  CHECK(v.encode(seg) == IdSegment{0, 0});
  const std::vector<Segment> segs = {{"b"}, {"a", "b"}};
  CHECK(v.encode(segs) == std::vector<IdSegment>{{0}});
}

TEST_CASE("labeled phrase examples") {
  std::istringstream in(
      "metaphor\tανοίγω\tανοίγω τους ορίζοντές μου\n"
      "\n"
      "literal\tανοίγω\tανοίγω την πόρτα\n");
  const auto phrases = parse_labeled_phrases(in, "phrases.tsv");
  REQUIRE(phrases.size() == 2);
  CHECK(phrases[0].label == Label::kMetaphor);
  CHECK(phrases[0].verb == "ανοίγω");
  CHECK(phrases[0].tokens == std::vector<Token>{"ανοίγω", "τους", "ορίζοντές", "μου"});
  CHECK(phrases[1].label == Label::kLiteral);
  const auto counts = count_labels(phrases);
  CHECK(counts.literal == 1);
  CHECK(counts.metaphor == 1);
  CHECK(counts.total() == phrases.size());
}

TEST_CASE("labeled phrase errors name the line") {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_labeled_phrases(in, "f.tsv");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFormat);
      return std::string(e.what());
    }
    FAIL("expected a format error");
    return std::string();
  };
  CHECK(error_of("figurative\tx\tx y\n").find("f.tsv:1:") == 0);
  CHECK(error_of("figurative\tx\tx y\n").find("unknown label") != std::string::npos);
  CHECK(error_of("literal\tx\tx y z\n\nliteral\n").find("f.tsv:3:") == 0);
  CHECK(error_of("literal\tx\n").find("f.tsv:1:") == 0);
  CHECK(error_of("literal\tx\tx y z\nmetaphor\tκλείνω\tανοίγω την πόρτα\n").find("f.tsv:2:") == 0);
  CHECK(error_of("literal\tκλείνω\tανοίγω την πόρτα\n").find("does not occur") !=
        std::string::npos);
}

TEST_CASE("label counts sum to the number of parsed lines") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::string text;
    std::size_t lines = 0;
    const std::size_t n = uniform_index(rng, 40);
    for (std::size_t k = 0; k < n; ++k) {
      if (uniform01(rng) < 0.1) {
        text += "\n";
        continue;
      }
      text += uniform01(rng) < 0.5 ? "literal" : "metaphor";
      text += "\tverb\tthe verb does things\n";
      ++lines;
    }
    std::istringstream in(text);
    const auto phrases = parse_labeled_phrases(in, "gen");
    CHECK(phrases.size() == lines);
    CHECK(count_labels(phrases).total() == lines);
  }
}

TEST_CASE("load_corpus keeps one segment per non-blank line") {
  const auto path = temp_file("corpus.txt");
  {
    std::ofstream out(path);
    out << "Η θάλασσα.\n\n   \n word2vec 450\r\n";
  }
  const auto segments = load_corpus(path);
  REQUIRE(segments.size() == 2);
  CHECK(segments[0] == Segment{"η", "θάλασσα"});
  CHECK(segments[1] == Segment{"word2vec", "450"});
  fs::remove(path);
}
