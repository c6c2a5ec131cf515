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

#ifndef MSX_SCATTERING_HPP_
#define MSX_SCATTERING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "msx/operators.hpp"

namespace msx {

enum class BackendKind { kSpectral, kMarkov };
enum class WaveletVariant { kPlain, kSqrt };
enum class EmbeddingMode { kConcat, kMean };

const char* to_string(BackendKind kind);
const char* to_string(WaveletVariant variant);

// A discretized heat semigroup H^t over N points, queried at dyadic times.
class HeatBackend {
 public:
  virtual ~HeatBackend() = default;

  virtual BackendKind kind() const noexcept = 0;
  virtual Index size() const noexcept = 0;

  // [H^1 F, H^2 F, H^4 F, ..., H^(2^max_level) F] for a block of column
  // signals F (N x S).
  virtual std::vector<Matrix> dyadic_powers(int max_level, const Matrix& signals) const = 0;
};

// H^t = sum_k exp(-tau lambda_k t) u_k u_k^T over the retained eigenpairs.
// tau rescales the spectral function g(lambda) = exp(-tau lambda); tau = 1/2
// makes H^1 the old H^(1/2).
class SpectralBackend final : public HeatBackend {
 public:
  explicit SpectralBackend(SpectralHeatOperator op, double tau = 1.0);

  BackendKind kind() const noexcept override { return BackendKind::kSpectral; }
  Index size() const noexcept override { return op_.size(); }
  std::vector<Matrix> dyadic_powers(int max_level, const Matrix& signals) const override;

  const SpectralHeatOperator& op() const noexcept { return op_; }
  double tau() const noexcept { return tau_; }

  // g(lambda_k) = exp(-tau lambda_k), clamped to [0, 1].
  Vector spectral_function() const;

 private:
  SpectralHeatOperator op_;
  double tau_;
};

// H^(2^j) = P^(2^j) with P = D^-1 W.
class MarkovBackend final : public HeatBackend {
 public:
  // Builds the dyadic cache up to `max_level` when the operator's policy
  // allows it.
  MarkovBackend(const MarkovOperator& op, int max_level);

  BackendKind kind() const noexcept override { return BackendKind::kMarkov; }
  Index size() const noexcept override { return op_.size(); }
  std::vector<Matrix> dyadic_powers(int max_level, const Matrix& signals) const override;

  const MarkovOperator& op() const noexcept { return op_; }

 private:
  MarkovOperator op_;
};

struct ScatteringConfig {
  int J = 8;
  int Q = 4;
  int max_order = 2;
  BackendKind backend = BackendKind::kSpectral;
  WaveletVariant wavelet = WaveletVariant::kPlain;

  // Throws kParameter for J outside [0, 20], Q < 1 or an order outside
  // {1, 2, 3}; kConfig for square-root wavelets on a Markov backend.
  void validate() const;
};

// One scattering moment: scales () | (j) | (j, j') | (j, j', j''), strictly
// increasing, with moment exponent q. `signal` tags concatenated embeddings
// (-1 for a single signal).
struct FeatureLabel {
  std::vector<int> scales;
  int q = 1;
  int signal = -1;

  // "S()q1", "S(2)q3", "S(1,3)q2"; concatenated features get an "f<i>:"
  // prefix.
  std::string to_string() const;
  friend bool operator==(const FeatureLabel&, const FeatureLabel&) = default;
};

// Canonical ordering: by path length, then lexicographically by scales, then
// ascending q.
std::vector<FeatureLabel> feature_labels(const ScatteringConfig& cfg);

// Q (1 + (J+1) + C(J+1, 2) [+ C(J+1, 3)]).
std::size_t feature_count(const ScatteringConfig& cfg);

struct FeatureVector {
  std::vector<double> values;
  std::vector<FeatureLabel> labels;

  std::size_t size() const noexcept { return values.size(); }
};

// [W_0 f, W_1 f, ..., W_J f, A_J f] with W_0 = Id - H^1,
// W_j = H^(2^(j-1)) - H^(2^j), A_J = H^(2^J). The identity is exact even when
// the backend is spectrally truncated, so the outputs always sum to f.
std::vector<Vector> wavelet_apply(const HeatBackend& backend, int J, const Vector& f);

// Square-root filters sqrt(1 - g), sqrt(g^(2^(j-1)) - g^(2^j)), sqrt(g^(2^J))
// applied per eigenvalue. The part of f outside the retained eigenvectors is
// passed through W'_0 (treated as g = 0), so the transform is an isometry for
// any truncation order.
std::vector<Vector> sqrt_wavelet_apply(const SpectralBackend& backend, int J, const Vector& f);

// Same transform by reference to the generic backend type; throws kConfig
// unless the backend is spectral.
std::vector<Vector> sqrt_wavelet_apply(const HeatBackend& backend, int J, const Vector& f);

// (1/N) sum_i |v_i|^q.
double lq_moment(const Vector& v, int q);

// Zeroth through `max_order` scattering moments of one signal, in canonical
// order. Throws kConfig when cfg.backend disagrees with the backend or the
// variant needs a spectral backend, kInput on length mismatch.
FeatureVector scattering_features(const HeatBackend& backend, const ScatteringConfig& cfg,
                                  const Vector& f);

// Features for S signals given as rows of an S x N matrix; returns S x F.
Matrix scattering_features_batch(const HeatBackend& backend, const ScatteringConfig& cfg,
                                 const Matrix& signals);

// `count` one-hot signals (rows of a count x N matrix) at distinct indices
// from sample_without_replacement(N, count, Rng(seed)).
Matrix dirac_signals(Index n, Index count, std::uint64_t seed);

// Concatenates (kConcat) or averages (kMean) per-signal features of the rows
// of `signals`. Throws kParameter on an empty signal list.
FeatureVector manifold_embedding(const HeatBackend& backend, const ScatteringConfig& cfg,
                                 const Matrix& signals, EmbeddingMode mode);

}  // namespace msx

#endif  // MSX_SCATTERING_HPP_
