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

#ifndef METAEMBED_ERROR_HPP_
#define METAEMBED_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace metaembed {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kFormat,
  kEncoding,
  kEmptyVocabulary,
  kEmptyInput,
  kDomain,
  kNumeric,
  kDegenerateSample,
};

// All failures in the library surface as Error; the code maps one-to-one
// onto the status values of the C interface.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace metaembed

#endif  // METAEMBED_ERROR_HPP_
