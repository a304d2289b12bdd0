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

#ifndef METAEMBED_TEXT_IO_HPP_
#define METAEMBED_TEXT_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace metaembed {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// Both throw Error(kFormat) with `what` in the message on malformed input.
double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_uint(std::string_view text, std::string_view what);

// Splits on ASCII space/tab; empty fields are dropped.
std::vector<std::string_view> split_fields(std::string_view line);

// Throw Error(kIo) naming the path when the file cannot be opened.
std::ifstream open_input(const std::filesystem::path& path,
                         bool binary = false);
std::ofstream open_output(const std::filesystem::path& path,
                          bool binary = false);

// Strips a trailing '\r' left by CRLF files.
inline std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace metaembed

#endif  // METAEMBED_TEXT_IO_HPP_
