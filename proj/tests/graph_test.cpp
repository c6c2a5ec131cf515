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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "msx/graph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace msx {
namespace {

PointCloud line(std::initializer_list<double> xs) {
  Matrix m(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return PointCloud(m, 1);
}

TEST(PointCloudTest, RejectsBadInput) {
  EXPECT_MSX_ERROR(PointCloud(Matrix(0, 3), 1), ErrorKind::kInput);
  Matrix bad = Matrix::Zero(2, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_MSX_ERROR(PointCloud(bad, 1), ErrorKind::kInput);
  EXPECT_MSX_ERROR(PointCloud(Matrix::Zero(2, 2), 3), ErrorKind::kParameter);
  EXPECT_MSX_ERROR(PointCloud(Matrix::Zero(2, 2), 0), ErrorKind::kParameter);
}

TEST(PairwiseSqDistTest, TwoPointsOnALine) {
  const Matrix d = pairwise_sq_dist(line({0.0, 3.0}));
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_EQ(d(0, 1), 9.0);
  EXPECT_EQ(d(1, 0), 9.0);
  EXPECT_EQ(d(1, 1), 0.0);
}

TEST(PairwiseSqDistTest, SinglePoint) {
  const Matrix d = pairwise_sq_dist(line({4.0}));
  ASSERT_EQ(d.rows(), 1);
  EXPECT_EQ(d(0, 0), 0.0);
}

TEST(PairwiseSqDistTest, MatchesDoubleLoop) {
  const Matrix x = oracle::random_matrix(10, 5, 1);
  const Matrix d = pairwise_sq_dist(PointCloud(x, 2));
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(d(i, i), 0.0);
    for (int j = 0; j < 10; ++j) {
      EXPECT_NEAR(d(i, j), oracle::sq_dist(x, i, j), 1e-12);
      EXPECT_EQ(d(i, j), d(j, i));
    }
  }
}

TEST(KnnScaleTest, HandExamples) {
  const PointCloud pc = line({0.0, 1.0, 3.0});
  const Vector s1 = knn_scale(pc, 1);
  EXPECT_DOUBLE_EQ(s1(0), 1.0);
  EXPECT_DOUBLE_EQ(s1(1), 1.0);
  EXPECT_DOUBLE_EQ(s1(2), 2.0);
  const Vector s2 = knn_scale(pc, 2);
  EXPECT_DOUBLE_EQ(s2(0), 3.0);
  EXPECT_DOUBLE_EQ(s2(1), 2.0);
  EXPECT_DOUBLE_EQ(s2(2), 3.0);
}

TEST(KnnScaleTest, MatchesSortOracle) {
  const Matrix x = oracle::random_matrix(50, 3, 2);
  const Vector s = knn_scale(PointCloud(x, 2), 5);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> row;
    for (int j = 0; j < 50; ++j) {
      if (j != i) row.push_back(std::sqrt(oracle::sq_dist(x, i, j)));
    }
    std::sort(row.begin(), row.end());
    EXPECT_NEAR(s(i), row[4], 1e-12);
  }
}

TEST(KnnScaleTest, PermutationEquivariant) {
  const Matrix x = oracle::random_matrix(20, 2, 3);
  std::vector<int> perm(20);
  for (int i = 0; i < 20; ++i) perm[i] = (7 * i + 3) % 20;
  Matrix px(20, 2);
  for (int i = 0; i < 20; ++i) px.row(i) = x.row(perm[i]);
  const Vector s = knn_scale(PointCloud(x, 1), 3);
  const Vector ps = knn_scale(PointCloud(px, 1), 3);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(ps(i), s(perm[i]), 1e-12);
}

TEST(KnnScaleTest, Errors) {
  const PointCloud pc = line({0.0, 1.0, 3.0});
  EXPECT_MSX_ERROR(knn_scale(pc, 3), ErrorKind::kParameter);
  EXPECT_MSX_ERROR(knn_scale(pc, 0), ErrorKind::kParameter);
  EXPECT_MSX_ERROR(knn_scale(line({0.0, 0.0, 5.0}), 1), ErrorKind::kDegenerateScale);
}

TEST(GaussianAffinityTest, DiagonalIsEpsPower) {
  const Matrix x = oracle::random_matrix(6, 3, 4);
  const AffinityGraph g1 = gaussian_affinity(PointCloud(x, 2), 1.0);
  const AffinityGraph g4 = gaussian_affinity(PointCloud(x, 2), 4.0);
  for (int i = 0; i < 6; ++i) {
    EXPECT_DOUBLE_EQ(g1.weights(i, i), 1.0);
    EXPECT_DOUBLE_EQ(g4.weights(i, i), 0.25);
  }
  EXPECT_TRUE(std::holds_alternative<GaussianKernel>(g4.kernel));
}

TEST(GaussianAffinityTest, OffDiagonalFormula) {
  const AffinityGraph g = gaussian_affinity(line({0.0, 1.0}), 1.0);
  EXPECT_NEAR(g.weights(0, 1), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(g.degrees(0), 1.0 + std::exp(-1.0), 1e-15);
}

TEST(GaussianAffinityTest, SymmetricAndBounded) {
  const Matrix x = oracle::random_matrix(25, 3, 5);
  const double eps = 0.7;
  const AffinityGraph g = gaussian_affinity(PointCloud(x, 2), eps);
  const Matrix ref = oracle::gaussian_weights(x, eps, 2);
  EXPECT_EQ((g.weights - g.weights.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((g.weights - ref).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT(g.weights.minCoeff(), 0.0);
  EXPECT_LE(g.weights.maxCoeff(), 1.0 / eps);
}

TEST(GaussianAffinityTest, NonPositiveBandwidth) {
  EXPECT_MSX_ERROR(gaussian_affinity(line({0.0, 1.0}), 0.0), ErrorKind::kParameter);
  EXPECT_MSX_ERROR(gaussian_affinity(line({0.0, 1.0}), -1.0), ErrorKind::kParameter);
}

TEST(AdaptiveAffinityTest, TwoPoints) {
  const AffinityGraph g = adaptive_affinity(line({0.0, 1.0}), 1);
  EXPECT_DOUBLE_EQ(g.weights(0, 0), 1.0);
  EXPECT_NEAR(g.weights(0, 1), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(g.weights(1, 0), std::exp(-1.0), 1e-15);
}

TEST(AdaptiveAffinityTest, MixedScales) {
  const AffinityGraph g = adaptive_affinity(line({0.0, 1.0, 3.0}), 1);
  EXPECT_NEAR(g.weights(0, 2), 0.5 * (std::exp(-9.0) + std::exp(-9.0 / 4.0)), 1e-15);
  EXPECT_TRUE(std::holds_alternative<AdaptiveKernel>(g.kernel));
}

TEST(AdaptiveAffinityTest, ExactlySymmetricWithUnitDiagonal) {
  const AffinityGraph g = adaptive_affinity(PointCloud(oracle::random_matrix(40, 3, 6), 2), 4);
  EXPECT_EQ((g.weights - g.weights.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (int i = 0; i < 40; ++i) EXPECT_EQ(g.weights(i, i), 1.0);
  EXPECT_GT(g.weights.minCoeff(), 0.0);
  EXPECT_LE(g.weights.maxCoeff(), 1.0);
}

TEST(AdaptiveAffinityTest, DuplicatePointsPropagate) {
  EXPECT_MSX_ERROR(adaptive_affinity(line({2.0, 2.0, 5.0}), 1), ErrorKind::kDegenerateScale);
}

TEST(DegreeVectorTest, Examples) {
  Matrix w(2, 2);
  w << 1, std::exp(-1.0), std::exp(-1.0), 1;
  const Vector d = degree_vector(w);
  EXPECT_DOUBLE_EQ(d(0), 1.0 + std::exp(-1.0));
  EXPECT_DOUBLE_EQ(d(1), 1.0 + std::exp(-1.0));
  EXPECT_EQ(degree_vector(Matrix::Identity(5, 5)), Vector::Ones(5));
}

TEST(DegreeVectorTest, MatchesNaiveSums) {
  const Matrix w = oracle::random_matrix(8, 8, 7).cwiseAbs();
  const Vector d = degree_vector(w);
  for (int i = 0; i < 8; ++i) {
    double forward = 0.0, backward = 0.0;
    for (int j = 0; j < 8; ++j) forward += w(i, j);
    for (int j = 7; j >= 0; --j) backward += w(i, j);
    EXPECT_NEAR(d(i), forward, 1e-12);
    EXPECT_NEAR(d(i), backward, 1e-12);
  }
}

TEST(DegreeVectorTest, Errors) {
  Matrix w = Matrix::Identity(3, 3);
  w(1, 1) = 0.0;
  EXPECT_MSX_ERROR(degree_vector(w), ErrorKind::kIsolatedPoint);
  w(1, 1) = -1.0;
  EXPECT_MSX_ERROR(degree_vector(w), ErrorKind::kInput);
  EXPECT_MSX_ERROR(degree_vector(Matrix::Ones(2, 3)), ErrorKind::kInput);
}

}  // namespace
}  // namespace msx
