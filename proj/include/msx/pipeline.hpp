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

#ifndef MSX_PIPELINE_HPP_
#define MSX_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msx/datasets.hpp"
#include "msx/feature_io.hpp"
#include "msx/scattering.hpp"

namespace msx {

enum class KernelChoice { kGaussian, kAdaptive };

// Every tunable of the point cloud -> operator -> features pipeline. The
// same struct backs the CLI and library callers.
struct PipelineConfig {
  BackendKind backend = BackendKind::kSpectral;
  KernelChoice kernel = KernelChoice::kGaussian;
  WaveletVariant wavelet = WaveletVariant::kPlain;
  int J = 8;
  int Q = 4;
  int order = 2;
  std::optional<Index> kappa;          // spectral backend
  std::optional<double> epsilon;       // unset means epsilon_rule(N, d, eps_const)
  double eps_const = kDefaultEpsilonConstant;
  std::optional<int> dim;              // intrinsic dimension
  std::optional<int> knn;              // adaptive kernel
  double tau = 1.0;
  std::optional<double> threshold;     // Markov sparsification
  std::optional<std::filesystem::path> eigs_path;  // precomputed eigenpairs

  // Throws kConfig when options contradict each other: spectral without
  // kappa (and no eigenpair file), adaptive without knn, Gaussian without
  // dim, sqrt wavelets on Markov.
  void validate() const;

  ScatteringConfig scattering() const;

  // Echo of the resolved settings for output provenance.
  nlohmann::json to_json() const;
};

// Point cloud with the intrinsic dimension the config implies (the adaptive
// kernel does not use it and defaults to 1).
PointCloud make_cloud(Matrix coords, const PipelineConfig& cfg);

// Bandwidth the Gaussian kernel will use for an N-point cloud.
double resolve_epsilon(const PipelineConfig& cfg, Index n);

// Graph, operator and backend for `cloud`. A spectral backend loaded from
// cfg.eigs_path must match the cloud size; on an adaptive graph the spectral
// backend uses the Laplacian (D - W) / N.
std::unique_ptr<HeatBackend> build_backend(const PointCloud& cloud, const PipelineConfig& cfg);

// Features of each signal row (S x N) with labels and the echoed config.
FeatureTable extract_features(const PointCloud& cloud, const Matrix& signals,
                              const PipelineConfig& cfg);

// Gaussian-kernel Laplacian eigenpairs (the eigs subcommand).
SpectralHeatOperator laplacian_eigs(const PointCloud& cloud, Index kappa, double epsilon);

// Projects `count` digits drawn without replacement (restricted to `digits`
// when non-empty) onto `cloud`, each under its own random rotation. Draws and
// rotation seeds come from one stream seeded by `seed`.
LabeledSignals mnist_sphere_signals(const MnistData& mnist, const PointCloud& cloud, Index count,
                                    std::uint64_t seed, const std::vector<int>& digits);

// Entry point of the msx executable. Returns the process exit code:
// 0 success, 2 usage/config error, 3 input-data error, 4 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace msx

#endif  // MSX_PIPELINE_HPP_
