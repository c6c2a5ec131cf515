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

#ifndef MSX_OPERATORS_HPP_
#define MSX_OPERATORS_HPP_

#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "msx/graph.hpp"

namespace msx {

inline constexpr double kDefaultEpsilonConstant = 2.0;

// Bandwidth c * N^(-1/(d/2 + 3)).
double epsilon_rule(Index n, int intrinsic_dim, double c = kDefaultEpsilonConstant);

// Scale s such that (D - W) / (eps N) built from the normalized Gaussian
// kernel tends to s * (-Laplace-Beltrami) for samples drawn with constant
// density `density` (1 / volume). For the unit sphere s = 1/16.
double gaussian_laplacian_scale(int intrinsic_dim, double density);

// L = (D - W) / (eps N).
struct LaplacianMatrix {
  Matrix matrix;
  double epsilon = 0.0;

  Index size() const noexcept { return matrix.rows(); }
};

LaplacianMatrix build_laplacian(const AffinityGraph& graph, double epsilon);

// The kappa smallest eigenpairs of a Laplacian. Eigenvalues ascend; each
// eigenvector is sign-normalized so its largest-magnitude entry is positive.
class SpectralHeatOperator {
 public:
  // Throws kInput on inconsistent shapes.
  SpectralHeatOperator(Vector eigenvalues, Matrix eigenvectors);

  const Vector& eigenvalues() const noexcept { return eigenvalues_; }
  const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
  Index size() const noexcept { return eigenvectors_.rows(); }
  Index order() const noexcept { return eigenvectors_.cols(); }

  // Coefficients U^T F for a block of column signals.
  Matrix coefficients(const Matrix& signals) const;

 private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

// Symmetric eigensolve (LAPACK dsyevr, index range) of the kappa smallest
// eigenpairs. Throws kParameter unless 1 <= kappa <= N and kNumerical if the
// solver fails or a residual |L u - lambda u| exceeds 1e-8.
SpectralHeatOperator smallest_eigs(const LaplacianMatrix& laplacian, Index kappa);

// Same solve for an arbitrary symmetric matrix.
SpectralHeatOperator smallest_eigs(const Matrix& symmetric, Index kappa);

// Flip each column so that its largest-magnitude entry is positive; ties go
// to the lowest row index.
void normalize_eigenvector_signs(Matrix& eigenvectors);

// sum_k exp(-lambda_k t) <u_k, f> u_k.
Vector heat_apply_spectral(const SpectralHeatOperator& op, double t, const Vector& f);
Matrix heat_apply_spectral(const SpectralHeatOperator& op, double t, const Matrix& signals);

// Row-stochastic P = D^-1 W, dense or thresholded to sparse storage.
//
// When dense and N <= kDyadicCacheLimit, with_dyadic_cache(J) precomputes
// P^(2^j) for j = 0..J by repeated squaring; every other configuration applies
// P to vectors 2^j times. Both paths compute the same operator.
class MarkovOperator {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  static constexpr Index kDyadicCacheLimit = 2048;

  // Takes a row-stochastic matrix; throws kInput if any row sum is off by
  // more than 1e-12 or an entry leaves [0, 1].
  explicit MarkovOperator(Matrix transition);

  Index size() const noexcept { return size_; }
  bool is_sparse() const noexcept { return sparse_.has_value(); }
  std::optional<double> threshold() const noexcept { return threshold_; }
  Index cached_levels() const noexcept { return static_cast<Index>(dyadic_cache_.size()); }

  // Dense copy of P (materialized from sparse storage if needed).
  Matrix dense() const;
  const SparseMatrix* sparse() const noexcept { return sparse_ ? &*sparse_ : nullptr; }

  // One application P F to a block of column signals.
  Matrix apply(const Matrix& signals) const;

  // P^(2^level) F.
  Matrix apply_dyadic(int level, const Matrix& signals) const;

  // Copy with P^(2^j), j = 0..max_level, cached when the policy allows it.
  MarkovOperator with_dyadic_cache(int max_level) const;

 private:
  friend MarkovOperator sparsify(const MarkovOperator& op, double threshold);
  MarkovOperator() = default;

  Index size_ = 0;
  Matrix dense_;
  std::optional<SparseMatrix> sparse_;
  std::optional<double> threshold_;
  std::vector<Matrix> dyadic_cache_;
};

// P = D^-1 W. Throws kIsolatedPoint on a zero degree.
MarkovOperator markov_operator(const AffinityGraph& graph);

// P^(2^level) f. Throws kInput on a length mismatch, kParameter on a
// negative level.
Vector markov_dyadic_apply(const MarkovOperator& op, int level, const Vector& f);

// Zero entries below `threshold` and renormalize each row. A row that would
// lose every entry keeps its largest original entry. Throws kParameter unless
// 0 <= threshold < 1.
MarkovOperator sparsify(const MarkovOperator& op, double threshold);

}  // namespace msx

#endif  // MSX_OPERATORS_HPP_
