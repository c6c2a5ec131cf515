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

#include "msx/eigen_io.hpp"

#include <json.hpp>
#include <vector>

#include "msx/errors.hpp"
#include "msx/io.hpp"

namespace msx {

using nlohmann::json;

std::string eigenpairs_to_json(const SpectralHeatOperator& op) {
  json doc;
  const Vector& values = op.eigenvalues();
  doc["eigenvalues"] = std::vector<double>(values.data(), values.data() + values.size());
  json vectors = json::array();
  for (Index k = 0; k < op.order(); ++k) {
    const Vector col = op.eigenvectors().col(k);
    vectors.push_back(std::vector<double>(col.data(), col.data() + col.size()));
  }
  doc["eigenvectors"] = std::move(vectors);
  return doc.dump() + "\n";
}

SpectralHeatOperator eigenpairs_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(ParseFault::kNonNumeric, 0, std::string("eigenpair JSON: ") + e.what());
  }
  try {
    const auto values = doc.at("eigenvalues").get<std::vector<double>>();
    const auto vectors = doc.at("eigenvectors").get<std::vector<std::vector<double>>>();
    if (values.empty() || vectors.size() != values.size()) {
      throw ParseError(ParseFault::kCountMismatch, 0,
                       "eigenpair JSON: " + std::to_string(values.size()) + " eigenvalues but " +
                           std::to_string(vectors.size()) + " eigenvectors");
    }
    const auto n = static_cast<Index>(vectors.front().size());
    Matrix u(n, static_cast<Index>(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      if (static_cast<Index>(vectors[k].size()) != n) {
        throw ParseError(ParseFault::kRaggedRow, k, "eigenvector " + std::to_string(k) +
                                                        " has the wrong length");
      }
      u.col(static_cast<Index>(k)) = Eigen::Map<const Vector>(vectors[k].data(), n);
    }
    Vector lambda = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
    return SpectralHeatOperator(std::move(lambda), std::move(u));
  } catch (const json::exception& e) {
    throw ParseError(ParseFault::kNonNumeric, 0, std::string("eigenpair JSON: ") + e.what());
  }
}

void save_eigenpairs(const std::filesystem::path& path, const SpectralHeatOperator& op) {
  write_file_atomic(path, eigenpairs_to_json(op));
}

SpectralHeatOperator load_eigenpairs(const std::filesystem::path& path) {
  return eigenpairs_from_json(read_text_file(path));
}

}  // namespace msx
