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

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>
#include <type_traits>

#include "msx/errors.hpp"
#include "msx/io.hpp"

namespace msx {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseFault::kUnreadable, 0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<unsigned char> read_binary_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseFault::kUnreadable, 0, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kConfig, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorKind::kConfig, "short write to " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::kConfig, "cannot move output into place at " + path.string());
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line) {
  field = trim(field);
  T value{};
  // from_chars rejects a leading '+', which some writers emit.
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  bool finite = true;
  if constexpr (std::is_floating_point_v<T>) finite = std::isfinite(value);
  if (field.empty() || ec != std::errc() || end != field.data() + field.size() || !finite) {
    throw ParseError(ParseFault::kNonNumeric, line,
                     "line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    const auto nl = text.find('\n');
    const std::string_view row = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!trim(row).empty()) fn(trim(row), line);
  }
}

}  // namespace

Matrix parse_matrix_csv(std::string_view text) {
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  for_each_line(text, [&](std::string_view row, std::size_t line) {
    Index count = 0;
    std::size_t start = 0;
    for (;;) {
      const auto comma = row.find(',', start);
      values.push_back(parse_field<double>(row.substr(start, comma - start), line));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols < 0) cols = count;
    if (count != cols) {
      throw ParseError(ParseFault::kRaggedRow, line,
                       "line " + std::to_string(line) + " has " + std::to_string(count) +
                           " fields, expected " + std::to_string(cols));
    }
    ++rows;
  });
  if (rows == 0) throw ParseError(ParseFault::kEmpty, 0, "no rows");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  }
  return m;
}

Matrix read_matrix_csv(const fs::path& path) {
  try {
    return parse_matrix_csv(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.fault(), e.location(), path.string() + ": " + e.detail());
  }
}

std::string format_matrix_csv(const Matrix& m) {
  std::string out;
  char buf[32];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out.push_back(',');
      const int len = std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out.append(buf, static_cast<std::size_t>(len));
    }
    out.push_back('\n');
  }
  return out;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  write_file_atomic(path, format_matrix_csv(m));
}

std::vector<int> read_labels_csv(const fs::path& path) {
  std::vector<int> labels;
  const std::string text = read_text_file(path);
  for_each_line(text, [&](std::string_view row, std::size_t line) {
    labels.push_back(parse_field<int>(row, line));
  });
  if (labels.empty()) throw ParseError(ParseFault::kEmpty, 0, path.string() + ": no labels");
  return labels;
}

void write_labels_csv(const fs::path& path, const std::vector<int>& labels) {
  std::string out;
  for (int label : labels) {
    out += std::to_string(label);
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

}  // namespace msx
