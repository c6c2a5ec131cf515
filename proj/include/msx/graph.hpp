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

#ifndef MSX_GRAPH_HPP_
#define MSX_GRAPH_HPP_

#include <Eigen/Dense>
#include <variant>

namespace msx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// N points in R^n, one per row, sampled from a manifold of declared
// intrinsic dimension d. The intrinsic dimension is never inferred.
class PointCloud {
 public:
  // Throws kInput on empty or non-finite coordinates, kParameter unless
  // 1 <= d <= n.
  PointCloud(Matrix coords, int intrinsic_dim);

  const Matrix& coords() const noexcept { return coords_; }
  Index size() const noexcept { return coords_.rows(); }
  Index ambient_dim() const noexcept { return coords_.cols(); }
  int intrinsic_dim() const noexcept { return intrinsic_dim_; }
  auto point(Index i) const { return coords_.row(i); }

 private:
  Matrix coords_;
  int intrinsic_dim_;
};

struct GaussianKernel {
  double epsilon;
};

struct AdaptiveKernel {
  int k;
};

using KernelKind = std::variant<GaussianKernel, AdaptiveKernel>;

// Symmetric nonnegative affinities with their row sums. Self-affinities stay
// on the diagonal, which keeps every degree positive.
struct AffinityGraph {
  Matrix weights;
  Vector degrees;
  KernelKind kernel;

  Index size() const noexcept { return weights.rows(); }
};

// M(i, j) = |x_i - x_j|^2, symmetric with an exactly zero diagonal.
Matrix pairwise_sq_dist(const PointCloud& cloud);

// Distance from each point to its k-th nearest other point. Ties in distance
// are broken by the smaller point index. Throws kParameter unless
// 1 <= k <= N-1 and kDegenerateScale when a scale is zero.
Vector knn_scale(const PointCloud& cloud, int k);

// W(i, j) = eps^(-d/2) exp(-|x_i - x_j|^2 / eps).
AffinityGraph gaussian_affinity(const PointCloud& cloud, double epsilon);

// W(i, j) = (exp(-r^2 / s_i^2) + exp(-r^2 / s_j^2)) / 2 with s the k-NN scale.
AffinityGraph adaptive_affinity(const PointCloud& cloud, int k);

// Row sums. Throws kIsolatedPoint on a zero row and kInput on a negative or
// non-square input.
Vector degree_vector(const Matrix& weights);

}  // namespace msx

#endif  // MSX_GRAPH_HPP_
