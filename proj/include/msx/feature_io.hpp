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

#ifndef MSX_FEATURE_IO_HPP_
#define MSX_FEATURE_IO_HPP_

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "msx/scattering.hpp"

namespace msx {

// A feature matrix (one row per signal or manifold) with its column labels.
struct FeatureTable {
  std::vector<FeatureLabel> labels;
  Matrix values;
  nlohmann::json config = nlohmann::json::object();
};

// {"config": {...}, "paths": [[scales...]...], "q": [...], "signal": [...],
//  "values": [[row...]...]}. "signal" is present only for concatenated
// embeddings.
std::string features_to_json(const FeatureTable& table);
FeatureTable features_from_json(const std::string& text);

// Header of label strings ("S(1,3)q2"), then one row per signal.
std::string features_to_csv(const FeatureTable& table);
FeatureTable features_from_csv(const std::string& text);

// Dispatches on the extension: ".json" or anything else as CSV.
void save_features(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable load_features(const std::filesystem::path& path);

// Inverse of FeatureLabel::to_string. Throws ParseError on malformed labels.
FeatureLabel parse_feature_label(const std::string& text);

}  // namespace msx

#endif  // MSX_FEATURE_IO_HPP_
