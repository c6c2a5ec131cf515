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

#include "msx/feature_io.hpp"

#include <charconv>
#include <string_view>

#include "msx/errors.hpp"
#include "msx/io.hpp"

namespace msx {

using nlohmann::json;

std::string features_to_json(const FeatureTable& table) {
  json doc;
  doc["config"] = table.config;
  json paths = json::array();
  json qs = json::array();
  json signals = json::array();
  bool tagged = false;
  for (const FeatureLabel& label : table.labels) {
    paths.push_back(label.scales);
    qs.push_back(label.q);
    signals.push_back(label.signal);
    tagged = tagged || label.signal >= 0;
  }
  doc["paths"] = std::move(paths);
  doc["q"] = std::move(qs);
  if (tagged) doc["signal"] = std::move(signals);
  json rows = json::array();
  for (Index r = 0; r < table.values.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(table.values.cols()));
    for (Index c = 0; c < table.values.cols(); ++c) row[static_cast<std::size_t>(c)] = table.values(r, c);
    rows.push_back(std::move(row));
  }
  doc["values"] = std::move(rows);
  return doc.dump() + "\n";
}

FeatureTable features_from_json(const std::string& text) {
  FeatureTable table;
  try {
    const json doc = json::parse(text);
    table.config = doc.value("config", json::object());
    const auto paths = doc.at("paths").get<std::vector<std::vector<int>>>();
    const auto qs = doc.at("q").get<std::vector<int>>();
    std::vector<int> signals(paths.size(), -1);
    if (doc.contains("signal")) signals = doc.at("signal").get<std::vector<int>>();
    if (qs.size() != paths.size() || signals.size() != paths.size()) {
      throw ParseError(ParseFault::kCountMismatch, 0, "feature JSON: label arrays differ in length");
    }
    for (std::size_t i = 0; i < paths.size(); ++i) {
      table.labels.push_back({paths[i], qs[i], signals[i]});
    }
    const auto rows = doc.at("values").get<std::vector<std::vector<double>>>();
    table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(paths.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != paths.size()) {
        throw ParseError(ParseFault::kRaggedRow, r + 1,
                         "feature JSON: row " + std::to_string(r) + " has the wrong length");
      }
      for (std::size_t c = 0; c < paths.size(); ++c) {
        table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(ParseFault::kNonNumeric, 0, std::string("feature JSON: ") + e.what());
  }
  return table;
}

std::string features_to_csv(const FeatureTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.labels.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += table.labels[i].to_string();
  }
  out.push_back('\n');
  return out + format_matrix_csv(table.values);
}

FeatureLabel parse_feature_label(const std::string& text) {
  std::string_view s = text;
  const auto fail = [&]() -> FeatureLabel {
    throw ParseError(ParseFault::kNonNumeric, 1, "bad feature label '" + text + "'");
  };
  auto read_int = [&](std::string_view& rest, int& value) {
    const auto [end, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc()) return false;
    rest.remove_prefix(static_cast<std::size_t>(end - rest.data()));
    return true;
  };
  FeatureLabel label;
  if (!s.empty() && s.front() == 'f') {
    s.remove_prefix(1);
    if (!read_int(s, label.signal) || s.empty() || s.front() != ':') return fail();
    s.remove_prefix(1);
  }
  if (s.substr(0, 2) != "S(") return fail();
  s.remove_prefix(2);
  while (!s.empty() && s.front() != ')') {
    int scale = 0;
    if (!read_int(s, scale)) return fail();
    label.scales.push_back(scale);
    if (!s.empty() && s.front() == ',') s.remove_prefix(1);
  }
  if (s.substr(0, 2) != ")q") return fail();
  s.remove_prefix(2);
  if (!read_int(s, label.q) || !s.empty()) return fail();
  return label;
}

FeatureTable features_from_csv(const std::string& text) {
  const auto nl = text.find('\n');
  const std::string header = text.substr(0, nl);
  FeatureTable table;
  // Labels such as "S(1,3)q2" contain commas; split only outside parentheses.
  std::string field;
  int depth = 0;
  const auto flush = [&] {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    table.labels.push_back(parse_feature_label(field));
    field.clear();
  };
  for (const char c : header) {
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    depth += c == '(' ? 1 : c == ')' ? -1 : 0;
    field.push_back(c);
  }
  flush();
  if (nl == std::string::npos) {
    table.values.resize(0, static_cast<Index>(table.labels.size()));
    return table;
  }
  try {
    table.values = parse_matrix_csv(std::string_view(text).substr(nl + 1));
  } catch (const ParseError& e) {
    // Data lines are numbered from the header.
    throw ParseError(e.fault(), e.location() + 1, e.detail());
  }
  if (table.values.cols() != static_cast<Index>(table.labels.size())) {
    throw ParseError(ParseFault::kRaggedRow, 2, "feature CSV: header and rows differ in width");
  }
  return table;
}

void save_features(const std::filesystem::path& path, const FeatureTable& table) {
  if (path.extension() == ".json") {
    write_file_atomic(path, features_to_json(table));
  } else {
    write_file_atomic(path, features_to_csv(table));
  }
}

FeatureTable load_features(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") return features_from_json(text);
  return features_from_csv(text);
}

}  // namespace msx
