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

#ifndef MSX_IO_HPP_
#define MSX_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "msx/graph.hpp"

namespace msx {

// Whole-file reads. Throws ParseError(kUnreadable) when the file cannot be
// opened.
std::string read_text_file(const std::filesystem::path& path);
std::vector<unsigned char> read_binary_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over `path`. Throws
// kConfig (a usage error) when the destination is not writable.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Comma-separated decimal floats, one row per line, no header. Blank lines
// are skipped. Throws ParseError naming the 1-based line on ragged rows or
// non-numeric fields, and kEmpty on a file with no rows.
Matrix parse_matrix_csv(std::string_view text);
Matrix read_matrix_csv(const std::filesystem::path& path);

// Values printed with 17 significant digits, so a save/load round trip is
// exact.
std::string format_matrix_csv(const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

// One integer label per line.
std::vector<int> read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);

}  // namespace msx

#endif  // MSX_IO_HPP_
