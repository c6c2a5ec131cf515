// Copyright 2026 The Manifold Scattering Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSX_ERRORS_HPP_
#define MSX_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msx {

enum class ErrorKind {
  kInput,           // malformed or non-finite input data, shape mismatch
  kParameter,       // argument outside its documented range
  kConfig,          // incompatible combination of options
  kParse,           // file could not be decoded
  kDegenerateScale, // k-NN scale is zero (duplicate points)
  kIsolatedPoint,   // zero row in an affinity matrix
  kNumerical,       // solver failure
};

const char* to_string(ErrorKind kind);

// Process exit code for a failure of the given kind:
// 2 usage/config, 3 input data, 4 numerical.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class ParseFault {
  kBadMagic,
  kTruncated,
  kCountMismatch,
  kRaggedRow,
  kNonNumeric,
  kEmpty,
  kUnreadable,
};

const char* to_string(ParseFault fault);

// Parse failure. `location()` is a byte offset for binary formats and a
// 1-based line number for text formats.
class ParseError : public Error {
 public:
  ParseError(ParseFault fault, std::size_t location, const std::string& message);

  ParseFault fault() const noexcept { return fault_; }
  std::size_t location() const noexcept { return location_; }
  // Message without the kind/fault prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ParseFault fault_;
  std::string detail_;
  std::size_t location_;
};

}  // namespace msx

#endif  // MSX_ERRORS_HPP_
