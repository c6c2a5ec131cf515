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

#include "msx/learn.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include "msx/errors.hpp"
#include "msx/operators.hpp"
#include "msx/random.hpp"

namespace msx {

void Dataset::validate() const {
  if (static_cast<Index>(y.size()) != X.rows()) {
    throw Error(ErrorKind::kInput, std::to_string(X.rows()) + " rows but " +
                                       std::to_string(y.size()) + " labels");
  }
  if (!X.allFinite()) throw Error(ErrorKind::kInput, "feature matrix has non-finite entries");
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.X.resize(static_cast<Index>(rows.size()), data.X.cols());
  out.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Index>(i)) = data.X.row(static_cast<Index>(rows[i]));
    out.y.push_back(data.y[rows[i]]);
  }
  return out;
}

Standardizer fit_standardizer(const Matrix& X) {
  if (X.rows() < 1) throw Error(ErrorKind::kInput, "cannot standardize an empty matrix");
  Standardizer s;
  s.mean = X.colwise().mean().transpose();
  const Matrix centered = X.rowwise() - s.mean.transpose();
  s.scale = (centered.array().square().colwise().sum() / static_cast<double>(X.rows()))
                .sqrt()
                .transpose();
  for (Index c = 0; c < s.scale.size(); ++c) {
    if (!(s.scale(c) > 0.0)) s.scale(c) = 1.0;
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& X) const {
  if (X.cols() != mean.size()) throw Error(ErrorKind::kInput, "feature width mismatch");
  return (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

PcaModel pca_fit(const Matrix& X, Index r) {
  const Index rows = X.rows();
  const Index cols = X.cols();
  if (r < 1 || r > std::min(rows, cols)) {
    throw Error(ErrorKind::kParameter, "PCA rank " + std::to_string(r) + " outside [1, " +
                                           std::to_string(std::min(rows, cols)) + "]");
  }
  if (!X.allFinite()) throw Error(ErrorKind::kInput, "PCA input has non-finite entries");
  PcaModel model;
  model.mean = X.colwise().mean().transpose();
  const Matrix centered = X.rowwise() - model.mean.transpose();
  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  model.components = svd.matrixV().leftCols(r);
  normalize_eigenvector_signs(model.components);
  const double denom = rows > 1 ? static_cast<double>(rows - 1) : 1.0;
  model.explained_variance = svd.singularValues().head(r).array().square() / denom;
  return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& X) {
  if (X.cols() != model.mean.size()) throw Error(ErrorKind::kInput, "feature width mismatch");
  return (X.rowwise() - model.mean.transpose()) * model.components;
}

Matrix pca_reconstruct(const PcaModel& model, const Matrix& projected) {
  if (projected.cols() != model.rank()) throw Error(ErrorKind::kInput, "projection width mismatch");
  return (projected * model.components.transpose()).rowwise() + model.mean.transpose();
}

namespace {

int majority_label(const std::map<int, int>& counts) {
  int best_label = 0;
  int best = -1;
  for (const auto& [label, n] : counts) {  // ascending label, strict > keeps the smallest
    if (n > best) {
      best = n;
      best_label = label;
    }
  }
  return best_label;
}

}  // namespace

std::vector<int> knn_fit_predict(const Dataset& train, int k, const Matrix& test_X) {
  train.validate();
  if (train.size() == 0) throw Error(ErrorKind::kInput, "empty training set");
  if (k < 1 || k > train.size()) {
    throw Error(ErrorKind::kParameter, "k-NN needs 1 <= k <= " + std::to_string(train.size()));
  }
  if (test_X.cols() != train.X.cols()) throw Error(ErrorKind::kInput, "feature width mismatch");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(test_X.rows()));
  std::vector<std::pair<double, Index>> dist(static_cast<std::size_t>(train.size()));
  for (Index t = 0; t < test_X.rows(); ++t) {
    for (Index i = 0; i < train.size(); ++i) {
      dist[static_cast<std::size_t>(i)] = {(train.X.row(i) - test_X.row(t)).squaredNorm(), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::map<int, int> votes;
    for (int n = 0; n < k; ++n) ++votes[train.y[static_cast<std::size_t>(dist[static_cast<std::size_t>(n)].second)]];
    out.push_back(majority_label(votes));
  }
  return out;
}

double gini_impurity(const std::vector<int>& labels) {
  if (labels.empty()) return 0.0;
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  double sum = 0.0;
  const double n = static_cast<double>(labels.size());
  for (const auto& [label, c] : counts) sum += (c / n) * (c / n);
  return 1.0 - sum;
}

namespace {

// Gini from class counts.
double gini_of(const std::vector<int>& counts, int total) {
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (int c : counts) sum += static_cast<double>(c) * c;
  return 1.0 - sum / (static_cast<double>(total) * total);
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, int max_depth, int min_leaf)
      : data_(data), max_depth_(max_depth), min_leaf_(min_leaf) {
    std::set<int> distinct(data.y.begin(), data.y.end());
    classes_.assign(distinct.begin(), distinct.end());
    for (std::size_t i = 0; i < data.y.size(); ++i) {
      class_index_.push_back(static_cast<int>(
          std::lower_bound(classes_.begin(), classes_.end(), data.y[i]) - classes_.begin()));
    }
  }

  TreeModel build() {
    std::vector<Index> rows(static_cast<std::size_t>(data_.size()));
    std::iota(rows.begin(), rows.end(), Index{0});
    grow(rows, 0);
    return std::move(model_);
  }

 private:
  int grow(const std::vector<Index>& rows, int depth) {
    const int id = static_cast<int>(model_.nodes.size());
    model_.nodes.emplace_back();
    std::vector<int> counts(classes_.size(), 0);
    for (Index r : rows) ++counts[static_cast<std::size_t>(class_index_[static_cast<std::size_t>(r)])];
    int best_class = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
      if (counts[c] > counts[static_cast<std::size_t>(best_class)]) best_class = static_cast<int>(c);
    }
    model_.nodes[static_cast<std::size_t>(id)].label = classes_[static_cast<std::size_t>(best_class)];

    const int total = static_cast<int>(rows.size());
    const bool pure = counts[static_cast<std::size_t>(best_class)] == total;
    if (pure || depth >= max_depth_ || total < 2 * min_leaf_) return id;

    double best_score = std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, int>> column(rows.size());
    for (Index f = 0; f < data_.X.cols(); ++f) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {data_.X(rows[i], f), class_index_[static_cast<std::size_t>(rows[i])]};
      }
      std::sort(column.begin(), column.end());
      std::vector<int> left(classes_.size(), 0);
      std::vector<int> right = counts;
      for (int i = 0; i + 1 < total; ++i) {
        const auto cls = static_cast<std::size_t>(column[static_cast<std::size_t>(i)].second);
        ++left[cls];
        --right[cls];
        const double lo = column[static_cast<std::size_t>(i)].first;
        const double hi = column[static_cast<std::size_t>(i) + 1].first;
        if (!(hi > lo)) continue;
        const int n_left = i + 1;
        const int n_right = total - n_left;
        if (n_left < min_leaf_ || n_right < min_leaf_) continue;
        const double score = (n_left * gini_of(left, n_left) + n_right * gini_of(right, n_right)) / total;
        // Strictly better by a margin, so rounding noise cannot break the
        // (feature, threshold) tie order.
        if (score < best_score - 1e-12) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = lo + 0.5 * (hi - lo);
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<Index> left_rows, right_rows;
    for (Index r : rows) {
      (data_.X(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    const int l = grow(left_rows, depth + 1);
    const int rgt = grow(right_rows, depth + 1);
    TreeNode& node = model_.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = rgt;
    return id;
  }

  const Dataset& data_;
  int max_depth_;
  int min_leaf_;
  std::vector<int> classes_;
  std::vector<int> class_index_;
  TreeModel model_;
};

int node_depth(const TreeModel& model, int id) {
  const TreeNode& n = model.nodes[static_cast<std::size_t>(id)];
  if (n.feature < 0) return 0;
  return 1 + std::max(node_depth(model, n.left), node_depth(model, n.right));
}

}  // namespace

int TreeModel::depth() const { return nodes.empty() ? 0 : node_depth(*this, 0); }

TreeModel tree_fit(const Dataset& train, int max_depth, int min_leaf) {
  train.validate();
  if (train.size() == 0) throw Error(ErrorKind::kInput, "empty training set");
  if (max_depth < 1 || min_leaf < 1) {
    throw Error(ErrorKind::kParameter, "tree needs max_depth >= 1 and min_leaf >= 1");
  }
  return TreeBuilder(train, max_depth, min_leaf).build();
}

std::vector<int> tree_predict(const TreeModel& model, const Matrix& X) {
  if (model.nodes.empty()) throw Error(ErrorKind::kInput, "empty tree");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Index r = 0; r < X.rows(); ++r) {
    int id = 0;
    while (model.nodes[static_cast<std::size_t>(id)].feature >= 0) {
      const TreeNode& n = model.nodes[static_cast<std::size_t>(id)];
      if (n.feature >= X.cols()) throw Error(ErrorKind::kInput, "feature width mismatch");
      id = X(r, n.feature) <= n.threshold ? n.left : n.right;
    }
    out.push_back(model.nodes[static_cast<std::size_t>(id)].label);
  }
  return out;
}

namespace {

// Nearest centroid (ties to the lower index) and squared distance.
std::pair<int, double> nearest(const Matrix& centroids, const Eigen::RowVectorXd& x) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centroids.rows(); ++c) {
    const double d = (centroids.row(c) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return {best, best_d};
}

Matrix kmeans_plus_plus(const Matrix& X, int K, Rng& rng) {
  const Index n = X.rows();
  Matrix centroids(K, X.cols());
  centroids.row(0) = X.row(static_cast<Index>(rng.index(static_cast<std::uint64_t>(n))));
  Vector d2(n);
  for (Index i = 0; i < n; ++i) d2(i) = (X.row(i) - centroids.row(0)).squaredNorm();
  for (int c = 1; c < K; ++c) {
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > target && d2(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = X.row(pick);
    for (Index i = 0; i < n; ++i) d2(i) = std::min(d2(i), (X.row(i) - centroids.row(c)).squaredNorm());
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const Matrix& X, int K, std::uint64_t seed, int max_iters) {
  const Index n = X.rows();
  if (K < 1 || K > n) throw Error(ErrorKind::kParameter, "k-means needs 1 <= K <= S");
  if (max_iters < 1) throw Error(ErrorKind::kParameter, "max_iters must be positive");
  if (!X.allFinite()) throw Error(ErrorKind::kInput, "k-means input has non-finite entries");
  Rng rng(seed);
  KMeansResult res;
  res.centroids = kmeans_plus_plus(X, K, rng);
  res.assignments.assign(static_cast<std::size_t>(n), -1);
  Vector dist(n);

  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      const auto [c, d] = nearest(res.centroids, X.row(i));
      if (res.assignments[static_cast<std::size_t>(i)] != c) changed = true;
      res.assignments[static_cast<std::size_t>(i)] = c;
      dist(i) = d;
      inertia += d;
    }
    if (!res.inertia_history.empty()) {
      const double prev = res.inertia_history.back();
      if (inertia > prev + 1e-9 * std::max(1.0, prev)) {
        throw Error(ErrorKind::kNumerical, "k-means inertia increased from " +
                                               std::to_string(prev) + " to " +
                                               std::to_string(inertia));
      }
    }
    res.inertia_history.push_back(inertia);
    res.iterations = iter + 1;
    if (!changed && iter > 0) break;

    Matrix sums = Matrix::Zero(K, X.cols());
    std::vector<int> counts(static_cast<std::size_t>(K), 0);
    for (Index i = 0; i < n; ++i) {
      const int c = res.assignments[static_cast<std::size_t>(i)];
      sums.row(c) += X.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < K; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        res.centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
        continue;
      }
      Index far = 0;
      dist.maxCoeff(&far);
      res.centroids.row(c) = X.row(far);
      dist(far) = 0.0;
    }
  }
  return res;
}

Vector cluster_proportions(const std::vector<int>& assignments, int K) {
  if (K < 1) throw Error(ErrorKind::kParameter, "K must be positive");
  if (assignments.empty()) throw Error(ErrorKind::kInput, "no assignments");
  Vector p = Vector::Zero(K);
  for (int a : assignments) {
    if (a < 0 || a >= K) throw Error(ErrorKind::kInput, "assignment outside [0, K)");
    p(a) += 1.0;
  }
  return p / static_cast<double>(assignments.size());
}

std::vector<int> fit_predict(const Dataset& train, const Matrix& test_X, const ModelSpec& spec) {
  train.validate();
  Matrix tr = train.X;
  Matrix te = test_X;
  if (spec.standardize) {
    const Standardizer s = fit_standardizer(tr);
    tr = s.transform(tr);
    te = s.transform(te);
  }
  if (spec.pca_components > 0) {
    const PcaModel pca = pca_fit(tr, spec.pca_components);
    tr = pca_transform(pca, tr);
    te = pca_transform(pca, te);
  }
  const Dataset prepared{std::move(tr), train.y};
  if (spec.kind == ModelKind::kKnn) return knn_fit_predict(prepared, spec.k, te);
  return tree_predict(tree_fit(prepared, spec.max_depth, spec.min_leaf), te);
}

namespace {

std::map<int, std::vector<std::size_t>> rows_by_class(const std::vector<int>& labels) {
  std::map<int, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
  return out;
}

std::vector<std::size_t> shuffled(const std::vector<std::size_t>& rows, Rng& rng) {
  const auto order = sample_without_replacement(rows.size(), rows.size(), rng);
  std::vector<std::size_t> out;
  out.reserve(rows.size());
  for (std::size_t o : order) out.push_back(rows[o]);
  return out;
}

}  // namespace

SplitIndices stratified_holdout(const std::vector<int>& labels, double test_fraction,
                                std::uint64_t seed) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
    throw Error(ErrorKind::kParameter, "test fraction must lie in (0, 1)");
  }
  Rng rng(seed);
  SplitIndices split;
  for (const auto& [label, rows] : rows_by_class(labels)) {
    const auto order = shuffled(rows, rng);
    std::size_t n_test = 0;
    if (order.size() >= 2) {
      n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(order.size())));
      n_test = std::clamp<std::size_t>(n_test, 1, order.size() - 1);
    }
    split.test.insert(split.test.end(), order.begin(), order.begin() + static_cast<long>(n_test));
    split.train.insert(split.train.end(), order.begin() + static_cast<long>(n_test), order.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorKind::kParameter, "need at least two folds");
  Rng rng(seed);
  std::vector<int> fold(labels.size(), 0);
  for (const auto& [label, rows] : rows_by_class(labels)) {
    if (static_cast<int>(rows.size()) < folds) {
      throw Error(ErrorKind::kParameter, "class " + std::to_string(label) + " has " +
                                             std::to_string(rows.size()) + " rows, fewer than " +
                                             std::to_string(folds) + " folds");
    }
    const auto order = shuffled(rows, rng);
    for (std::size_t p = 0; p < order.size(); ++p) fold[order[p]] = static_cast<int>(p % folds);
  }
  return fold;
}

EvaluationReport evaluate(const Dataset& data, const ModelSpec& model, const SplitSpec& split) {
  data.validate();
  const auto classes = rows_by_class(data.y);
  if (classes.size() < 2) throw Error(ErrorKind::kParameter, "evaluation needs at least two classes");

  EvaluationReport report;
  report.model = model;
  report.split = split;
  for (const auto& [label, rows] : classes) report.per_class[label] = {};
  int correct = 0;
  auto score = [&](const SplitIndices& idx) {
    const Dataset train = subset(data, idx.train);
    const Dataset test = subset(data, idx.test);
    const auto predicted = fit_predict(train, test.X, model);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      ClassTally& tally = report.per_class[test.y[i]];
      ++tally.n_test;
      if (predicted[i] == test.y[i]) {
        ++tally.correct;
        ++correct;
      }
    }
    report.n_train += static_cast<int>(idx.train.size());
    report.n_test += static_cast<int>(idx.test.size());
  };

  switch (split.kind) {
    case SplitKind::kHoldout:
      score(stratified_holdout(data.y, split.test_fraction, split.seed));
      break;
    case SplitKind::kKFold: {
      const auto fold = stratified_folds(data.y, split.folds, split.seed);
      for (int f = 0; f < split.folds; ++f) {
        SplitIndices idx;
        for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? idx.test : idx.train).push_back(i);
        score(idx);
      }
      break;
    }
    case SplitKind::kLeaveOneOut:
      for (std::size_t held = 0; held < data.y.size(); ++held) {
        SplitIndices idx;
        idx.test.push_back(held);
        for (std::size_t i = 0; i < data.y.size(); ++i) {
          if (i != held) idx.train.push_back(i);
        }
        score(idx);
      }
      break;
  }
  report.accuracy = report.n_test > 0 ? static_cast<double>(correct) / report.n_test : 0.0;
  return report;
}

const char* to_string(ModelKind kind) { return kind == ModelKind::kKnn ? "knn" : "tree"; }

const char* to_string(SplitKind kind) {
  switch (kind) {
    case SplitKind::kHoldout: return "holdout";
    case SplitKind::kKFold: return "kfold";
    case SplitKind::kLeaveOneOut: return "loo";
  }
  return "holdout";
}

std::string EvaluationReport::to_json() const {
  using nlohmann::json;
  json doc;
  doc["accuracy"] = accuracy;
  doc["n_train"] = n_train;
  doc["n_test"] = n_test;
  json m;
  m["kind"] = msx::to_string(model.kind);
  m["standardize"] = model.standardize;
  m["pca"] = model.pca_components;
  if (model.kind == ModelKind::kKnn) {
    m["k"] = model.k;
  } else {
    m["max_depth"] = model.max_depth;
    m["min_leaf"] = model.min_leaf;
  }
  doc["model"] = std::move(m);
  doc["seed"] = split.seed;
  json s;
  s["kind"] = msx::to_string(split.kind);
  if (split.kind == SplitKind::kHoldout) s["test_fraction"] = split.test_fraction;
  if (split.kind == SplitKind::kKFold) s["folds"] = split.folds;
  doc["split"] = std::move(s);
  json pc = json::object();
  for (const auto& [label, tally] : per_class) {
    pc[std::to_string(label)] = {{"n_test", tally.n_test}, {"correct", tally.correct}};
  }
  doc["per_class"] = std::move(pc);
  return doc.dump(2) + "\n";
}

}  // namespace msx
