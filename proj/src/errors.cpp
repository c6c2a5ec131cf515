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

#include "msx/errors.hpp"

namespace msx {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kDegenerateScale: return "degenerate scale";
    case ErrorKind::kIsolatedPoint: return "isolated point";
    case ErrorKind::kNumerical: return "numerical error";
  }
  return "error";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter:
    case ErrorKind::kConfig:
      return 2;
    case ErrorKind::kInput:
    case ErrorKind::kParse:
    case ErrorKind::kDegenerateScale:
    case ErrorKind::kIsolatedPoint:
      return 3;
    case ErrorKind::kNumerical:
      return 4;
  }
  return 1;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

const char* to_string(ParseFault fault) {
  switch (fault) {
    case ParseFault::kBadMagic: return "bad magic number";
    case ParseFault::kTruncated: return "truncated file";
    case ParseFault::kCountMismatch: return "count mismatch";
    case ParseFault::kRaggedRow: return "ragged row";
    case ParseFault::kNonNumeric: return "non-numeric field";
    case ParseFault::kEmpty: return "empty file";
    case ParseFault::kUnreadable: return "unreadable file";
  }
  return "parse fault";
}

ParseError::ParseError(ParseFault fault, std::size_t location, const std::string& message)
    : Error(ErrorKind::kParse, std::string(to_string(fault)) + ": " + message),
      fault_(fault),
      detail_(message),
      location_(location) {}

}  // namespace msx
