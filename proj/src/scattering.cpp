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

#include "msx/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "msx/errors.hpp"
#include "msx/random.hpp"

namespace msx {

const char* to_string(BackendKind kind) {
  return kind == BackendKind::kSpectral ? "spectral" : "markov";
}

const char* to_string(WaveletVariant variant) {
  return variant == WaveletVariant::kPlain ? "plain" : "sqrt";
}

SpectralBackend::SpectralBackend(SpectralHeatOperator op, double tau)
    : op_(std::move(op)), tau_(tau) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw Error(ErrorKind::kParameter, "time scale tau must be positive");
  }
}

Vector SpectralBackend::spectral_function() const {
  return (-tau_ * op_.eigenvalues().array()).exp().min(1.0).matrix();
}

std::vector<Matrix> SpectralBackend::dyadic_powers(int max_level, const Matrix& signals) const {
  const Matrix coeffs = op_.coefficients(signals);
  const Vector g = spectral_function();
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(max_level) + 1);
  Vector filter = g;  // g^(2^j), by repeated squaring
  for (int j = 0; j <= max_level; ++j) {
    if (j > 0) filter = filter.cwiseProduct(filter);
    out.push_back(op_.eigenvectors() * (filter.asDiagonal() * coeffs));
  }
  return out;
}

MarkovBackend::MarkovBackend(const MarkovOperator& op, int max_level)
    : op_(op.with_dyadic_cache(max_level)) {}

std::vector<Matrix> MarkovBackend::dyadic_powers(int max_level, const Matrix& signals) const {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(max_level) + 1);
  if (op_.cached_levels() > max_level) {
    for (int j = 0; j <= max_level; ++j) out.push_back(op_.apply_dyadic(j, signals));
    return out;
  }
  // H^(2^j) F = P^(2^(j-1)) H^(2^(j-1)) F, so 2^max_level applications total.
  out.push_back(op_.apply(signals));
  for (int j = 1; j <= max_level; ++j) {
    Matrix cur = out.back();
    const long long reps = 1LL << (j - 1);
    for (long long r = 0; r < reps; ++r) cur = op_.apply(cur);
    out.push_back(std::move(cur));
  }
  return out;
}

void ScatteringConfig::validate() const {
  if (J < 0 || J > 20) throw Error(ErrorKind::kParameter, "J must lie in [0, 20]");
  if (Q < 1) throw Error(ErrorKind::kParameter, "Q must be at least 1");
  if (max_order < 1 || max_order > 3) {
    throw Error(ErrorKind::kParameter, "scattering order must be 1, 2 or 3");
  }
  if (wavelet == WaveletVariant::kSqrt && backend != BackendKind::kSpectral) {
    throw Error(ErrorKind::kConfig, "square-root wavelets need the spectral backend");
  }
}

std::string FeatureLabel::to_string() const {
  std::string s;
  if (signal >= 0) s = "f" + std::to_string(signal) + ":";
  s += "S(";
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(scales[i]);
  }
  s += ")q" + std::to_string(q);
  return s;
}

namespace {

// Strictly increasing scale tuples of the given length over [0, J], in
// lexicographic order.
std::vector<std::vector<int>> scale_paths(int J, int length) {
  std::vector<std::vector<int>> paths;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == length) {
      paths.push_back(cur);
      return;
    }
    for (int j = start; j <= J; ++j) {
      cur.push_back(j);
      self(self, j + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return paths;
}

void check_backend(const HeatBackend& backend, const ScatteringConfig& cfg) {
  cfg.validate();
  if (backend.kind() != cfg.backend) {
    throw Error(ErrorKind::kConfig, std::string("configuration asks for the ") +
                                        to_string(cfg.backend) + " backend but got " +
                                        to_string(backend.kind()));
  }
}

std::vector<Matrix> plain_wavelets(const HeatBackend& backend, int J, const Matrix& signals) {
  if (signals.rows() != backend.size()) {
    throw Error(ErrorKind::kInput, "signal length " + std::to_string(signals.rows()) +
                                       " does not match backend size " +
                                       std::to_string(backend.size()));
  }
  const std::vector<Matrix> heat = backend.dyadic_powers(J, signals);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(J) + 2);
  out.push_back(signals - heat[0]);
  for (int j = 1; j <= J; ++j) out.push_back(heat[j - 1] - heat[j]);
  out.push_back(heat[static_cast<std::size_t>(J)]);
  return out;
}

std::vector<Matrix> sqrt_wavelets(const SpectralBackend& backend, int J, const Matrix& signals) {
  const SpectralHeatOperator& op = backend.op();
  const Matrix coeffs = op.coefficients(signals);
  const Matrix complement = signals - op.eigenvectors() * coeffs;
  const Vector g = backend.spectral_function();

  auto filtered = [&](const Vector& response) -> Matrix {
    return op.eigenvectors() * (response.asDiagonal() * coeffs);
  };
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(J) + 2);
  out.push_back(filtered((1.0 - g.array()).max(0.0).sqrt().matrix()) + complement);
  Vector prev = g;  // g^(2^(j-1))
  for (int j = 1; j <= J; ++j) {
    const Vector next = prev.cwiseProduct(prev);
    out.push_back(filtered((prev - next).array().max(0.0).sqrt().matrix()));
    prev = next;
  }
  out.push_back(filtered(prev.array().sqrt().matrix()));
  return out;
}

std::vector<Matrix> wavelet_block(const HeatBackend& backend, const ScatteringConfig& cfg,
                                  const Matrix& signals) {
  if (cfg.wavelet == WaveletVariant::kSqrt) {
    return sqrt_wavelets(static_cast<const SpectralBackend&>(backend), cfg.J, signals);
  }
  return plain_wavelets(backend, cfg.J, signals);
}

std::vector<Vector> columns_of(const std::vector<Matrix>& blocks) {
  std::vector<Vector> out;
  out.reserve(blocks.size());
  for (const Matrix& m : blocks) out.push_back(m.col(0));
  return out;
}

// (1/N) sum |x|^q for q = 1..Q of every column.
Matrix column_moments(const Matrix& block, int Q) {
  const double inv_n = 1.0 / static_cast<double>(block.rows());
  Matrix out(Q, block.cols());
  const Eigen::ArrayXXd a = block.array().abs();
  Eigen::ArrayXXd power = a;
  for (int q = 1; q <= Q; ++q) {
    if (q > 1) power *= a;
    out.row(q - 1) = power.colwise().sum().matrix() * inv_n;
  }
  return out;
}

}  // namespace

std::vector<FeatureLabel> feature_labels(const ScatteringConfig& cfg) {
  cfg.validate();
  std::vector<FeatureLabel> labels;
  for (int length = 0; length <= cfg.max_order; ++length) {
    for (const auto& scales : scale_paths(cfg.J, length)) {
      for (int q = 1; q <= cfg.Q; ++q) labels.push_back({scales, q, -1});
    }
  }
  return labels;
}

std::size_t feature_count(const ScatteringConfig& cfg) {
  cfg.validate();
  const std::size_t m = static_cast<std::size_t>(cfg.J) + 1;
  std::size_t paths = 1 + m;
  if (cfg.max_order >= 2) paths += m * (m - 1) / 2;
  if (cfg.max_order >= 3) paths += m * (m - 1) * (m - 2) / 6;
  return static_cast<std::size_t>(cfg.Q) * paths;
}

std::vector<Vector> wavelet_apply(const HeatBackend& backend, int J, const Vector& f) {
  if (J < 0) throw Error(ErrorKind::kParameter, "J must be nonnegative");
  if (!f.allFinite()) throw Error(ErrorKind::kInput, "signal has non-finite entries");
  return columns_of(plain_wavelets(backend, J, Matrix(f)));
}

std::vector<Vector> sqrt_wavelet_apply(const SpectralBackend& backend, int J, const Vector& f) {
  if (J < 0) throw Error(ErrorKind::kParameter, "J must be nonnegative");
  if (!f.allFinite()) throw Error(ErrorKind::kInput, "signal has non-finite entries");
  return columns_of(sqrt_wavelets(backend, J, Matrix(f)));
}

std::vector<Vector> sqrt_wavelet_apply(const HeatBackend& backend, int J, const Vector& f) {
  if (backend.kind() != BackendKind::kSpectral) {
    throw Error(ErrorKind::kConfig, "square-root wavelets need the spectral backend");
  }
  return sqrt_wavelet_apply(static_cast<const SpectralBackend&>(backend), J, f);
}

double lq_moment(const Vector& v, int q) {
  if (q < 1) throw Error(ErrorKind::kParameter, "moment order q must be positive");
  if (v.size() == 0) throw Error(ErrorKind::kInput, "empty signal");
  return column_moments(Matrix(v), q)(q - 1, 0);
}

Matrix scattering_features_batch(const HeatBackend& backend, const ScatteringConfig& cfg,
                                 const Matrix& signals) {
  check_backend(backend, cfg);
  if (signals.cols() != backend.size()) {
    throw Error(ErrorKind::kInput, "signals have length " + std::to_string(signals.cols()) +
                                       ", backend has " + std::to_string(backend.size()) +
                                       " points");
  }
  if (!signals.allFinite()) throw Error(ErrorKind::kInput, "signal has non-finite entries");

  const int J = cfg.J;
  const int Q = cfg.Q;
  const Index s_count = signals.rows();
  const Matrix f = signals.transpose();  // N x S
  const Index n = f.rows();

  Matrix out(s_count, static_cast<Index>(feature_count(cfg)));
  Index col = 0;
  auto emit = [&](const Matrix& block) {  // block: N x S for one path
    out.middleCols(col, Q) = column_moments(block, Q).transpose();
    col += Q;
  };

  emit(f);
  const std::vector<Matrix> first = wavelet_block(backend, cfg, f);
  for (int j = 0; j <= J; ++j) emit(first[static_cast<std::size_t>(j)]);
  if (cfg.max_order < 2) return out;

  // Second order: W_j' |W_j f| for j < j'. All |W_j f| with j < J go through
  // one batched transform; block j occupies columns [j S, (j+1) S).
  const int inner = J;  // scales that have a larger partner
  Matrix modulus(n, inner * s_count);
  for (int j = 0; j < inner; ++j) {
    modulus.middleCols(j * s_count, s_count) = first[static_cast<std::size_t>(j)].cwiseAbs();
  }
  const std::vector<Matrix> second =
      inner > 0 ? wavelet_block(backend, cfg, modulus) : std::vector<Matrix>{};
  auto second_block = [&](int j, int jp) -> Matrix {
    return second[static_cast<std::size_t>(jp)].middleCols(j * s_count, s_count);
  };
  for (int j = 0; j <= J; ++j) {
    for (int jp = j + 1; jp <= J; ++jp) emit(second_block(j, jp));
  }
  if (cfg.max_order < 3) return out;

  // Third order: W_j'' |W_j' |W_j f|| for j < j' < j''.
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j <= J; ++j) {
    for (int jp = j + 1; jp < J; ++jp) pairs.emplace_back(j, jp);
  }
  Matrix modulus2(n, static_cast<Index>(pairs.size()) * s_count);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    modulus2.middleCols(static_cast<Index>(p) * s_count, s_count) =
        second_block(pairs[p].first, pairs[p].second).cwiseAbs();
  }
  const std::vector<Matrix> third =
      pairs.empty() ? std::vector<Matrix>{} : wavelet_block(backend, cfg, modulus2);
  std::size_t p = 0;
  for (int j = 0; j <= J; ++j) {
    for (int jp = j + 1; jp <= J; ++jp) {
      for (int jpp = jp + 1; jpp <= J; ++jpp) {
        // pairs are enumerated in the same (j, j') order, skipping j' = J.
        while (pairs[p] != std::make_pair(j, jp)) ++p;
        emit(third[static_cast<std::size_t>(jpp)].middleCols(static_cast<Index>(p) * s_count,
                                                               s_count));
      }
    }
  }
  return out;
}

FeatureVector scattering_features(const HeatBackend& backend, const ScatteringConfig& cfg,
                                  const Vector& f) {
  const Matrix row = scattering_features_batch(backend, cfg, f.transpose());
  FeatureVector fv;
  fv.values.assign(row.data(), row.data() + row.size());
  fv.labels = feature_labels(cfg);
  return fv;
}

Matrix dirac_signals(Index n, Index count, std::uint64_t seed) {
  if (n < 1 || count < 1 || count > n) {
    throw Error(ErrorKind::kParameter, "need 1 <= count <= N for Dirac signals");
  }
  Rng rng(seed);
  const auto idx = sample_without_replacement(static_cast<std::size_t>(n),
                                              static_cast<std::size_t>(count), rng);
  Matrix out = Matrix::Zero(count, n);
  for (Index r = 0; r < count; ++r) out(r, static_cast<Index>(idx[static_cast<std::size_t>(r)])) = 1.0;
  return out;
}

FeatureVector manifold_embedding(const HeatBackend& backend, const ScatteringConfig& cfg,
                                 const Matrix& signals, EmbeddingMode mode) {
  if (signals.rows() == 0) throw Error(ErrorKind::kParameter, "no signals to embed");
  const Matrix per_signal = scattering_features_batch(backend, cfg, signals);
  const std::vector<FeatureLabel> base = feature_labels(cfg);
  FeatureVector fv;
  if (mode == EmbeddingMode::kMean) {
    const Vector mean = per_signal.colwise().mean().transpose();
    fv.values.assign(mean.data(), mean.data() + mean.size());
    fv.labels = base;
    return fv;
  }
  fv.values.reserve(static_cast<std::size_t>(per_signal.size()));
  for (Index s = 0; s < per_signal.rows(); ++s) {
    for (Index c = 0; c < per_signal.cols(); ++c) fv.values.push_back(per_signal(s, c));
    for (FeatureLabel label : base) {
      label.signal = static_cast<int>(s);
      fv.labels.push_back(std::move(label));
    }
  }
  return fv;
}

}  // namespace msx
