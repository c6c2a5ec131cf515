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

#ifndef MSX_EIGEN_IO_HPP_
#define MSX_EIGEN_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "msx/operators.hpp"

namespace msx {

// {"eigenvalues": [...], "eigenvectors": [[...], ...]} where eigenvectors[k]
// is the k-th eigenvector (length N). Doubles are written in shortest
// round-trip form.
std::string eigenpairs_to_json(const SpectralHeatOperator& op);

// Throws ParseError on malformed documents or inconsistent lengths.
SpectralHeatOperator eigenpairs_from_json(std::string_view text);

void save_eigenpairs(const std::filesystem::path& path, const SpectralHeatOperator& op);
SpectralHeatOperator load_eigenpairs(const std::filesystem::path& path);

}  // namespace msx

#endif  // MSX_EIGEN_IO_HPP_
