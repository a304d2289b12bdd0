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

#include "metaembed/cooccur.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "metaembed/error.hpp"
#include "metaembed/text_io.hpp"

namespace metaembed {
namespace {

constexpr std::size_t kRecordBytes = 16;

void put_le(unsigned char* out, std::uint64_t value, int bytes) {
  for (int b = 0; b < bytes; ++b) out[b] = static_cast<unsigned char>(value >> (8 * b));
}

std::uint64_t get_le(const unsigned char* in, int bytes) {
  std::uint64_t value = 0;
  for (int b = 0; b < bytes; ++b) value |= static_cast<std::uint64_t>(in[b]) << (8 * b);
  return value;
}

std::uint64_t pair_key(WordId i, WordId j) {
  return (static_cast<std::uint64_t>(i) << 32) | j;
}

using Accumulator = std::unordered_map<std::uint64_t, double>;

// Adds the contributions of one segment to the rows owned by `worker`.
void accumulate_segment(std::span<const WordId> ids, std::uint32_t window,
                        Weighting weighting, unsigned worker, unsigned workers,
                        Accumulator& acc) {
  const std::size_t n = ids.size();
  for (std::size_t p = 0; p < n; ++p) {
    const WordId a = ids[p];
    const std::size_t last = std::min<std::size_t>(n - 1, p + window);
    for (std::size_t q = p + 1; q <= last; ++q) {
      const WordId b = ids[q];
      const double w = weighting == Weighting::kFlat
                           ? 1.0
                           : 1.0 / static_cast<double>(q - p);
      if (a % workers == worker) acc[pair_key(a, b)] += w;
      if (b % workers == worker) acc[pair_key(b, a)] += w;
    }
  }
}

std::vector<CooccurrenceEntry> drain(Accumulator& acc) {
  std::vector<CooccurrenceEntry> entries;
  entries.reserve(acc.size());
  for (const auto& [key, x] : acc) {
    entries.push_back({static_cast<WordId>(key >> 32),
                       static_cast<WordId>(key & 0xFFFFFFFFu), x});
  }
  acc.clear();
  return entries;
}

bool key_less(const CooccurrenceEntry& a, const CooccurrenceEntry& b) {
  return a.i != b.i ? a.i < b.i : a.j < b.j;
}

}  // namespace

CooccurrenceTable CooccurrenceTable::from_entries(
    std::vector<CooccurrenceEntry> entries, std::uint32_t window) {
  std::sort(entries.begin(), entries.end(), key_less);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const CooccurrenceEntry& e = entries[k];
    if (!(e.x > 0.0) || !std::isfinite(e.x)) {
      throw Error(ErrorCode::kDomain, "co-occurrence value must be positive and finite at (" +
                                          std::to_string(e.i) + "," +
                                          std::to_string(e.j) + ")");
    }
    if (k > 0 && entries[k - 1].i == e.i && entries[k - 1].j == e.j) {
      throw Error(ErrorCode::kFormat, "duplicate co-occurrence pair (" +
                                          std::to_string(e.i) + "," +
                                          std::to_string(e.j) + ")");
    }
  }
  CooccurrenceTable table;
  table.entries_ = std::move(entries);
  table.window_ = window;
  return table;
}

CooccurrenceTable CooccurrenceTable::load(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, /*binary=*/true);
  std::vector<CooccurrenceEntry> entries;
  unsigned char record[kRecordBytes];
  while (true) {
    in.read(reinterpret_cast<char*>(record), kRecordBytes);
    const std::streamsize got = in.gcount();
    if (got == 0) break;
    if (got != static_cast<std::streamsize>(kRecordBytes)) {
      throw Error(ErrorCode::kFormat, "truncated co-occurrence record in " + path.string());
    }
    entries.push_back({static_cast<WordId>(get_le(record, 4)),
                       static_cast<WordId>(get_le(record + 4, 4)),
                       std::bit_cast<double>(get_le(record + 8, 8))});
  }
  return from_entries(std::move(entries));
}

void CooccurrenceTable::write(std::ostream& out) const {
  unsigned char record[kRecordBytes];
  for (const CooccurrenceEntry& e : entries_) {
    put_le(record, e.i, 4);
    put_le(record + 4, e.j, 4);
    put_le(record + 8, std::bit_cast<std::uint64_t>(e.x), 8);
    out.write(reinterpret_cast<const char*>(record), kRecordBytes);
  }
}

void CooccurrenceTable::save(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path, /*binary=*/true);
  write(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

double CooccurrenceTable::at(WordId i, WordId j) const {
  const CooccurrenceEntry probe{i, j, 0.0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), probe, key_less);
  if (it == entries_.end() || it->i != i || it->j != j) return 0.0;
  return it->x;
}

std::size_t CooccurrenceTable::id_bound() const {
  std::size_t bound = 0;
  for (const CooccurrenceEntry& e : entries_) {
    bound = std::max<std::size_t>(bound, std::max(e.i, e.j) + std::size_t{1});
  }
  return bound;
}

double CooccurrenceTable::total() const {
  double sum = 0.0;
  for (const CooccurrenceEntry& e : entries_) sum += e.x;
  return sum;
}

bool CooccurrenceTable::is_symmetric() const {
  for (const CooccurrenceEntry& e : entries_) {
    if (at(e.j, e.i) != e.x) return false;
  }
  return true;
}

CooccurrenceTable build_cooccurrence(std::span<const IdSegment> segments,
                                     std::size_t vocab_size,
                                     const CooccurrenceOptions& options) {
  if (options.window < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window must be at least 1");
  }
  for (const IdSegment& seg : segments) {
    for (WordId id : seg) {
      if (id >= vocab_size) {
        throw Error(ErrorCode::kInvalidArgument,
                    "word id " + std::to_string(id) + " outside vocabulary of size " +
                        std::to_string(vocab_size));
      }
    }
  }
  const unsigned workers = std::max(1u, options.threads);
  std::vector<Accumulator> partial(workers);
  auto run = [&](unsigned worker) {
    for (const IdSegment& seg : segments) {
      accumulate_segment(seg, options.window, options.weighting, worker, workers,
                         partial[worker]);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  // Workers own disjoint rows, so the merge is a concatenation.
  std::vector<CooccurrenceEntry> entries;
  for (Accumulator& acc : partial) {
    std::vector<CooccurrenceEntry> part = drain(acc);
    entries.insert(entries.end(), part.begin(), part.end());
  }
  return CooccurrenceTable::from_entries(std::move(entries), options.window);
}

CooccurrenceTable build_cooccurrence(std::span<const WordId> ids,
                                     std::uint32_t window, Weighting weighting) {
  if (window < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window must be at least 1");
  }
  Accumulator acc;
  accumulate_segment(ids, window, weighting, 0, 1, acc);
  return CooccurrenceTable::from_entries(drain(acc), window);
}

std::vector<ContextWindow> iterate_windows(std::span<const WordId> ids,
                                           std::uint32_t radius) {
  if (radius < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window radius must be at least 1");
  }
  std::vector<ContextWindow> windows;
  windows.reserve(ids.size());
  for_each_window(ids, radius, [&](const ContextWindow& w) { windows.push_back(w); });
  return windows;
}

}  // namespace metaembed
