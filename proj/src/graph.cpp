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

#include "msx/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "msx/errors.hpp"

namespace msx {

PointCloud::PointCloud(Matrix coords, int intrinsic_dim)
    : coords_(std::move(coords)), intrinsic_dim_(intrinsic_dim) {
  if (coords_.rows() < 1 || coords_.cols() < 1) {
    throw Error(ErrorKind::kInput, "point cloud needs at least one point and one coordinate");
  }
  if (!coords_.allFinite()) throw Error(ErrorKind::kInput, "point cloud has non-finite coordinates");
  if (intrinsic_dim_ < 1 || intrinsic_dim_ > coords_.cols()) {
    throw Error(ErrorKind::kParameter, "intrinsic dimension " + std::to_string(intrinsic_dim_) +
                                           " outside [1, " + std::to_string(coords_.cols()) + "]");
  }
}

Matrix pairwise_sq_dist(const PointCloud& cloud) {
  const Matrix& x = cloud.coords();
  const Index n = x.rows();
  Matrix dist = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = (x.row(i) - x.row(j)).squaredNorm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

namespace {

Vector knn_scale_from_sq_dist(const Matrix& dist, int k) {
  const Index n = dist.rows();
  if (k < 1 || k > n - 1) {
    throw Error(ErrorKind::kParameter, "k = " + std::to_string(k) + " requires 1 <= k <= N-1 = " +
                                           std::to_string(n - 1));
  }
  Vector scale(n);
  std::vector<std::pair<double, Index>> row;
  row.reserve(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    row.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i) row.emplace_back(dist(i, j), j);
    }
    auto kth = row.begin() + (k - 1);
    std::nth_element(row.begin(), kth, row.end());
    scale(i) = std::sqrt(kth->first);
    if (!(scale(i) > 0.0)) {
      throw Error(ErrorKind::kDegenerateScale,
                  "point " + std::to_string(i) + " has " + std::to_string(k) +
                      " duplicate neighbours; its k-NN scale is zero");
    }
  }
  return scale;
}

}  // namespace

Vector knn_scale(const PointCloud& cloud, int k) {
  return knn_scale_from_sq_dist(pairwise_sq_dist(cloud), k);
}

AffinityGraph gaussian_affinity(const PointCloud& cloud, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::kParameter, "Gaussian bandwidth must be positive and finite");
  }
  const Matrix dist = pairwise_sq_dist(cloud);
  const double scale = std::pow(epsilon, -0.5 * cloud.intrinsic_dim());
  const Index n = dist.rows();
  Matrix w(n, n);
  for (Index i = 0; i < n; ++i) {
    w(i, i) = scale;
    for (Index j = i + 1; j < n; ++j) {
      const double v = scale * std::exp(-dist(i, j) / epsilon);
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  Vector deg = degree_vector(w);
  return {std::move(w), std::move(deg), GaussianKernel{epsilon}};
}

AffinityGraph adaptive_affinity(const PointCloud& cloud, int k) {
  const Matrix dist = pairwise_sq_dist(cloud);
  const Vector sigma = knn_scale_from_sq_dist(dist, k);
  const Vector inv_sq = sigma.array().square().inverse();
  const Index n = dist.rows();
  Matrix w(n, n);
  for (Index i = 0; i < n; ++i) {
    w(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      const double v =
          0.5 * (std::exp(-dist(i, j) * inv_sq(i)) + std::exp(-dist(i, j) * inv_sq(j)));
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  Vector deg = degree_vector(w);
  return {std::move(w), std::move(deg), AdaptiveKernel{k}};
}

Vector degree_vector(const Matrix& weights) {
  if (weights.rows() != weights.cols()) {
    throw Error(ErrorKind::kInput, "affinity matrix must be square");
  }
  if ((weights.array() < 0.0).any()) {
    throw Error(ErrorKind::kInput, "affinity matrix has negative entries");
  }
  Vector deg = weights.rowwise().sum();
  for (Index i = 0; i < deg.size(); ++i) {
    if (!(deg(i) > 0.0)) {
      throw Error(ErrorKind::kIsolatedPoint,
                  "point " + std::to_string(i) + " has zero degree; kernel bandwidth too small");
    }
  }
  return deg;
}

}  // namespace msx
