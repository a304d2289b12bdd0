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

#ifndef METAEMBED_COOCCUR_HPP_
#define METAEMBED_COOCCUR_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "metaembed/corpus.hpp"

namespace metaembed {

enum class Weighting { kFlat, kInverseDistance };

struct CooccurrenceEntry {
  WordId i;
  WordId j;
  double x;

  bool operator==(const CooccurrenceEntry&) const = default;
};

// Sparse X_ij table. Entries are kept sorted by (i, j) and every stored
// value is strictly positive.
class CooccurrenceTable {
 public:
  CooccurrenceTable() = default;

  // Sorts and validates; duplicate (i, j) keys and non-positive or
  // non-finite values are rejected.
  static CooccurrenceTable from_entries(std::vector<CooccurrenceEntry> entries,
                                        std::uint32_t window = 0);

  // Binary triplet format: u32 i, u32 j, f64 x, all little-endian.
  static CooccurrenceTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;

  std::span<const CooccurrenceEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  // 0 when the table was loaded from disk.
  std::uint32_t window() const noexcept { return window_; }

  // X_ij, or 0 for absent pairs.
  double at(WordId i, WordId j) const;
  // Largest id + 1.
  std::size_t id_bound() const;
  double total() const;
  bool is_symmetric() const;

  bool operator==(const CooccurrenceTable& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::vector<CooccurrenceEntry> entries_;
  std::uint32_t window_ = 0;
};

struct CooccurrenceOptions {
  std::uint32_t window = 10;
  Weighting weighting = Weighting::kInverseDistance;
  unsigned threads = 1;
};

// Every pair of positions at distance d <= window inside one segment adds
// 1 (flat) or 1/d (inverse distance) to both X_ij and X_ji. Ids must be
// below `vocab_size`. With several threads each worker owns the rows
// i % threads == worker and scans the whole input, so every entry is summed
// in stream order and the result matches the sequential build exactly.
CooccurrenceTable build_cooccurrence(std::span<const IdSegment> segments,
                                     std::size_t vocab_size,
                                     const CooccurrenceOptions& options);

// Single-stream convenience form without an id bound.
CooccurrenceTable build_cooccurrence(std::span<const WordId> ids,
                                     std::uint32_t window,
                                     Weighting weighting);

struct ContextWindow {
  WordId center = 0;
  std::vector<WordId> context;
  std::uint32_t radius = 0;
};

// Calls fn(const ContextWindow&) once per position; windows at the stream
// edges are truncated. The window object is reused between calls.
template <class Fn>
void for_each_window(std::span<const WordId> ids, std::uint32_t radius, Fn&& fn) {
  ContextWindow window;
  window.radius = radius;
  window.context.reserve(2 * static_cast<std::size_t>(radius));
  const std::size_t n = ids.size();
  for (std::size_t pos = 0; pos < n; ++pos) {
    window.center = ids[pos];
    window.context.clear();
    const std::size_t lo = pos >= radius ? pos - radius : 0;
    const std::size_t hi = std::min(n, pos + radius + 1);
    for (std::size_t q = lo; q < hi; ++q) {
      if (q != pos) window.context.push_back(ids[q]);
    }
    fn(static_cast<const ContextWindow&>(window));
  }
}

std::vector<ContextWindow> iterate_windows(std::span<const WordId> ids,
                                           std::uint32_t radius);

}  // namespace metaembed

#endif  // METAEMBED_COOCCUR_HPP_
