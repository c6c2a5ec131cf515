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

#include "msx/operators.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "msx/errors.hpp"

namespace msx {

namespace {

constexpr double kEigenResidualBound = 1e-8;
constexpr double kStochasticTolerance = 1e-12;

void check_length(Index expected, Index actual) {
  if (expected != actual) {
    throw Error(ErrorKind::kInput, "signal length " + std::to_string(actual) +
                                       " does not match operator size " + std::to_string(expected));
  }
}

}  // namespace

double epsilon_rule(Index n, int intrinsic_dim, double c) {
  if (n < 1) throw Error(ErrorKind::kParameter, "point count must be positive");
  if (intrinsic_dim < 1) throw Error(ErrorKind::kParameter, "intrinsic dimension must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::kParameter, "bandwidth constant must be positive");
  }
  const double exponent = -1.0 / (0.5 * intrinsic_dim + 3.0);
  return c * std::pow(static_cast<double>(n), exponent);
}

double gaussian_laplacian_scale(int intrinsic_dim, double density) {
  if (intrinsic_dim < 1 || !(density > 0.0)) {
    throw Error(ErrorKind::kParameter, "need positive dimension and density");
  }
  // The kernel integrates to pi^(d/2) and has per-axis second moment
  // pi^(d/2) eps / 2 over R^d.
  return density * std::pow(std::numbers::pi, 0.5 * intrinsic_dim) / 4.0;
}

LaplacianMatrix build_laplacian(const AffinityGraph& graph, double epsilon) {
  const Index n = graph.size();
  if (graph.weights.cols() != n || graph.degrees.size() != n) {
    throw Error(ErrorKind::kInput, "affinity graph has inconsistent dimensions");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kParameter, "epsilon must be positive");
  const double scale = 1.0 / (epsilon * static_cast<double>(n));
  Matrix l = -graph.weights * scale;
  // Diagonal from the off-diagonal row sum so that L 1 = 0 up to rounding
  // of the off-diagonal terms alone.
  for (Index i = 0; i < n; ++i) {
    l(i, i) = (graph.degrees(i) - graph.weights(i, i)) * scale;
  }
  return {std::move(l), epsilon};
}

SpectralHeatOperator::SpectralHeatOperator(Vector eigenvalues, Matrix eigenvectors)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
  if (eigenvectors_.cols() != eigenvalues_.size() || eigenvectors_.rows() < eigenvectors_.cols() ||
      eigenvalues_.size() < 1) {
    throw Error(ErrorKind::kInput, "eigenpair shapes are inconsistent");
  }
  if (!eigenvalues_.allFinite() || !eigenvectors_.allFinite()) {
    throw Error(ErrorKind::kInput, "eigenpairs must be finite");
  }
}

Matrix SpectralHeatOperator::coefficients(const Matrix& signals) const {
  check_length(size(), signals.rows());
  return eigenvectors_.transpose() * signals;
}

void normalize_eigenvector_signs(Matrix& eigenvectors) {
  for (Index k = 0; k < eigenvectors.cols(); ++k) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < eigenvectors.rows(); ++i) {
      const double a = std::abs(eigenvectors(i, k));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (eigenvectors(arg, k) < 0.0) eigenvectors.col(k) *= -1.0;
  }
}

SpectralHeatOperator smallest_eigs(const Matrix& symmetric, Index kappa) {
  const Index n = symmetric.rows();
  if (symmetric.cols() != n) throw Error(ErrorKind::kInput, "matrix must be square");
  if (kappa < 1 || kappa > n) {
    throw Error(ErrorKind::kParameter, "kappa = " + std::to_string(kappa) +
                                           " requires 1 <= kappa <= N = " + std::to_string(n));
  }
  Matrix a = symmetric;
  Vector values(n);
  Matrix vectors(n, kappa);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(kappa));
  lapack_int found = 0;
  const auto ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'U', ln, a.data(), ln, 0.0, 0.0, 1,
      static_cast<lapack_int>(kappa), 0.0, &found, values.data(), vectors.data(), ln,
      support.data());
  if (info != 0 || found != kappa) {
    throw Error(ErrorKind::kNumerical, "dsyevr failed (info " + std::to_string(info) + ", found " +
                                           std::to_string(found) + " of " +
                                           std::to_string(kappa) + " eigenpairs)");
  }
  Vector lambda = values.head(kappa);
  normalize_eigenvector_signs(vectors);

  const Matrix residual = symmetric * vectors - vectors * lambda.asDiagonal();
  for (Index k = 0; k < kappa; ++k) {
    const double r = residual.col(k).norm();
    if (!(r <= kEigenResidualBound)) {
      throw Error(ErrorKind::kNumerical, "eigenpair " + std::to_string(k) + " residual " +
                                             std::to_string(r) + " exceeds 1e-8 (lambda = " +
                                             std::to_string(lambda(k)) + ")");
    }
  }
  return SpectralHeatOperator(std::move(lambda), std::move(vectors));
}

SpectralHeatOperator smallest_eigs(const LaplacianMatrix& laplacian, Index kappa) {
  return smallest_eigs(laplacian.matrix, kappa);
}

Matrix heat_apply_spectral(const SpectralHeatOperator& op, double t, const Matrix& signals) {
  if (!(t >= 0.0)) throw Error(ErrorKind::kParameter, "diffusion time must be nonnegative");
  if (!signals.allFinite()) throw Error(ErrorKind::kInput, "signal has non-finite entries");
  const Vector decay = (-t * op.eigenvalues().array()).exp();
  return op.eigenvectors() * (decay.asDiagonal() * op.coefficients(signals));
}

Vector heat_apply_spectral(const SpectralHeatOperator& op, double t, const Vector& f) {
  return heat_apply_spectral(op, t, Matrix(f));
}

MarkovOperator::MarkovOperator(Matrix transition) : size_(transition.rows()) {
  if (transition.cols() != size_ || size_ < 1) {
    throw Error(ErrorKind::kInput, "transition matrix must be square and nonempty");
  }
  if (!transition.allFinite() || (transition.array() < 0.0).any() ||
      (transition.array() > 1.0).any()) {
    throw Error(ErrorKind::kInput, "transition entries must lie in [0, 1]");
  }
  const Vector sums = transition.rowwise().sum();
  for (Index i = 0; i < size_; ++i) {
    if (std::abs(sums(i) - 1.0) > kStochasticTolerance) {
      throw Error(ErrorKind::kInput, "row " + std::to_string(i) + " of transition matrix sums to " +
                                         std::to_string(sums(i)));
    }
  }
  dense_ = std::move(transition);
}

Matrix MarkovOperator::dense() const {
  if (sparse_) return Matrix(*sparse_);
  return dense_;
}

Matrix MarkovOperator::apply(const Matrix& signals) const {
  check_length(size_, signals.rows());
  if (sparse_) return *sparse_ * signals;
  return dense_ * signals;
}

Matrix MarkovOperator::apply_dyadic(int level, const Matrix& signals) const {
  if (level < 0) throw Error(ErrorKind::kParameter, "dyadic level must be nonnegative");
  check_length(size_, signals.rows());
  const Index cached = cached_levels();
  if (level < cached) return dyadic_cache_[static_cast<std::size_t>(level)] * signals;

  Matrix out = signals;
  if (cached > 0) {
    // P^(2^level) = (P^(2^(cached-1)))^(2^(level-cached+1)).
    const Matrix& top = dyadic_cache_.back();
    const long long reps = 1LL << (level - cached + 1);
    for (long long r = 0; r < reps; ++r) out = top * out;
    return out;
  }
  const long long reps = 1LL << level;
  for (long long r = 0; r < reps; ++r) out = apply(out);
  return out;
}

MarkovOperator MarkovOperator::with_dyadic_cache(int max_level) const {
  if (max_level < 0) throw Error(ErrorKind::kParameter, "dyadic level must be nonnegative");
  MarkovOperator copy = *this;
  if (sparse_ || size_ > kDyadicCacheLimit) return copy;
  copy.dyadic_cache_.clear();
  copy.dyadic_cache_.reserve(static_cast<std::size_t>(max_level) + 1);
  copy.dyadic_cache_.push_back(dense_);
  for (int j = 1; j <= max_level; ++j) {
    const Matrix& prev = copy.dyadic_cache_.back();
    copy.dyadic_cache_.push_back(prev * prev);
  }
  return copy;
}

MarkovOperator markov_operator(const AffinityGraph& graph) {
  const Vector deg = degree_vector(graph.weights);
  Matrix p = deg.cwiseInverse().asDiagonal() * graph.weights;
  return MarkovOperator(std::move(p));
}

Vector markov_dyadic_apply(const MarkovOperator& op, int level, const Vector& f) {
  return op.apply_dyadic(level, Matrix(f)).col(0);
}

MarkovOperator sparsify(const MarkovOperator& op, double threshold) {
  if (!(threshold >= 0.0) || !(threshold < 1.0)) {
    throw Error(ErrorKind::kParameter, "sparsification threshold must lie in [0, 1)");
  }
  const Matrix p = op.dense();
  const Index n = p.rows();
  std::vector<Eigen::Triplet<double>> kept;
  for (Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    const std::size_t first = kept.size();
    for (Index j = 0; j < n; ++j) {
      if (p(i, j) > 0.0 && p(i, j) >= threshold) {
        kept.emplace_back(static_cast<int>(i), static_cast<int>(j), p(i, j));
        row_sum += p(i, j);
      }
    }
    if (kept.size() == first) {
      Index arg = 0;
      p.row(i).maxCoeff(&arg);
      kept.emplace_back(static_cast<int>(i), static_cast<int>(arg), 1.0);
      continue;
    }
    for (std::size_t t = first; t < kept.size(); ++t) {
      kept[t] = Eigen::Triplet<double>(kept[t].row(), kept[t].col(), kept[t].value() / row_sum);
    }
  }
  MarkovOperator out;
  out.size_ = n;
  MarkovOperator::SparseMatrix s(n, n);
  s.setFromTriplets(kept.begin(), kept.end());
  s.makeCompressed();
  out.sparse_ = std::move(s);
  out.threshold_ = threshold;
  return out;
}

}  // namespace msx
