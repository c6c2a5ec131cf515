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

#ifndef MSX_LEARN_HPP_
#define MSX_LEARN_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "msx/graph.hpp"

namespace msx {

// Feature matrix, one row per sample, with integer labels.
struct Dataset {
  Matrix X;
  std::vector<int> y;

  Index size() const noexcept { return X.rows(); }
  // Throws kInput on non-finite entries or a label count mismatch.
  void validate() const;
};

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows);

// Per-column z-score. Columns with zero spread keep scale 1.
struct Standardizer {
  Vector mean;
  Vector scale;

  Matrix transform(const Matrix& X) const;
};

Standardizer fit_standardizer(const Matrix& X);

struct PcaModel {
  Vector mean;
  Matrix components;           // F x r, orthonormal columns
  Vector explained_variance;   // descending

  Index rank() const noexcept { return components.cols(); }
};

// Top-r principal axes of the centered data (thin SVD). Each axis is signed
// so its largest-magnitude entry is positive. Throws kParameter unless
// 1 <= r <= min(S, F).
PcaModel pca_fit(const Matrix& X, Index r);
Matrix pca_transform(const PcaModel& model, const Matrix& X);
Matrix pca_reconstruct(const PcaModel& model, const Matrix& projected);

// Majority vote among the k nearest training rows (Euclidean). Vote ties go
// to the smallest label, distance ties to the smaller training index.
std::vector<int> knn_fit_predict(const Dataset& train, int k, const Matrix& test_X);

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  int left = -1;     // rows with x[feature] <= threshold
  int right = -1;
  int label = 0;     // majority label at this node
};

// CART classifier: axis-aligned splits at midpoints between consecutive
// distinct feature values, chosen by weighted Gini impurity. Ties in impurity
// prefer the lower feature index, then the lower threshold.
struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int depth() const;
};

// An impure node is split while depth < max_depth and a split leaving at
// least min_leaf rows on each side exists. Throws kParameter when max_depth
// or min_leaf is below 1.
TreeModel tree_fit(const Dataset& train, int max_depth, int min_leaf);
std::vector<int> tree_predict(const TreeModel& model, const Matrix& X);

// 1 - sum_c p_c^2 over the given labels.
double gini_impurity(const std::vector<int>& labels);

struct KMeansResult {
  std::vector<int> assignments;
  Matrix centroids;                    // K x F
  std::vector<double> inertia_history; // after each assignment step
  int iterations = 0;
};

// k-means++ seeding from `seed`, then Lloyd iterations until the assignment
// is a fixpoint or max_iters. A centroid left without points is moved onto
// the point farthest from its own centroid. Inertia is checked to be
// non-increasing every iteration (kNumerical otherwise). Throws kParameter
// unless 1 <= K <= S.
KMeansResult kmeans(const Matrix& X, int K, std::uint64_t seed, int max_iters = 300);

// Fraction of points in each of the K clusters.
Vector cluster_proportions(const std::vector<int>& assignments, int K);

enum class ModelKind { kKnn, kTree };

struct ModelSpec {
  ModelKind kind = ModelKind::kKnn;
  int k = 5;
  int max_depth = 5;
  int min_leaf = 2;
  int pca_components = 0;  // 0 disables PCA
  bool standardize = true;
};

// Standardize (fit on train), optional PCA (fit on train), then classify.
std::vector<int> fit_predict(const Dataset& train, const Matrix& test_X, const ModelSpec& spec);

enum class SplitKind { kHoldout, kKFold, kLeaveOneOut };

struct SplitSpec {
  SplitKind kind = SplitKind::kHoldout;
  double test_fraction = 0.25;
  int folds = 5;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per class (ascending label) shuffle the class's rows with
// sample_without_replacement and send the first round(fraction * n_c) rows,
// clamped to [1, n_c - 1], to the test side. Classes with one row stay in
// training.
SplitIndices stratified_holdout(const std::vector<int>& labels, double test_fraction,
                                std::uint64_t seed);

// Stratified fold id per row: within each class, shuffled position mod
// folds. Throws kParameter if some class has fewer than `folds` rows.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed);

struct ClassTally {
  int n_test = 0;
  int correct = 0;
};

struct EvaluationReport {
  double accuracy = 0.0;
  int n_train = 0;  // summed over folds for k-fold and leave-one-out
  int n_test = 0;
  ModelSpec model;
  SplitSpec split;
  std::map<int, ClassTally> per_class;

  // {"accuracy", "n_train", "n_test", "model": {...}, "seed", "split": {...},
  //  "per_class": {"<label>": {"n_test", "correct"}}}
  std::string to_json() const;
};

// Throws kParameter with fewer than two classes.
EvaluationReport evaluate(const Dataset& data, const ModelSpec& model, const SplitSpec& split);

const char* to_string(ModelKind kind);
const char* to_string(SplitKind kind);

}  // namespace msx

#endif  // MSX_LEARN_HPP_
