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

#include <cmath>
#include <random>
#include <set>

#include "msx/graph.hpp"
#include "msx/operators.hpp"
#include "msx/scattering.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace msx {
namespace {

struct Fixture {
  Matrix coords;
  Matrix weights;
  std::unique_ptr<HeatBackend> markov;
  std::unique_ptr<SpectralBackend> spectral;
};

// Gaussian graph on random points with both backends; `kappa` = 0 keeps the
// full spectrum.
Fixture make_fixture(int n, std::uint64_t seed, int J, int kappa = 0) {
  Fixture fx;
  fx.coords = oracle::random_matrix(n, 3, seed);
  fx.weights = oracle::gaussian_weights(fx.coords, 1.0, 2);
  const AffinityGraph g = gaussian_affinity(PointCloud(fx.coords, 2), 1.0);
  fx.markov = std::make_unique<MarkovBackend>(markov_operator(g), J);
  fx.spectral = std::make_unique<SpectralBackend>(
      smallest_eigs(build_laplacian(g, 1.0), kappa == 0 ? n : kappa));
  return fx;
}

Vector random_vector(int n, std::uint64_t seed) { return oracle::random_matrix(n, 1, seed).col(0); }

double max_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(WaveletTest, TelescopesToIdentityForEveryScale) {
  for (int J = 0; J <= 8; ++J) {
    const Fixture fx = make_fixture(20, 1, J, 8);
    const Vector f = random_vector(20, 2);
    for (const HeatBackend* b : {static_cast<const HeatBackend*>(fx.markov.get()),
                                 static_cast<const HeatBackend*>(fx.spectral.get())}) {
      const auto parts = wavelet_apply(*b, J, f);
      ASSERT_EQ(parts.size(), static_cast<std::size_t>(J + 2));
      Vector sum = Vector::Zero(20);
      for (const Vector& p : parts) sum += p;
      EXPECT_LE(max_diff(sum, f), 1e-10) << "J=" << J;
    }
  }
}

TEST(WaveletTest, MarkovAnnihilatesConstants) {
  const Fixture fx = make_fixture(15, 3, 5);
  const auto parts = wavelet_apply(*fx.markov, 5, Vector::Ones(15));
  for (int j = 0; j <= 5; ++j) EXPECT_LE(parts[j].cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(max_diff(parts.back(), Vector::Ones(15)), 1e-12);
}

TEST(WaveletTest, MarkovMatchesDenseAssembly) {
  const Fixture fx = make_fixture(6, 4, 3);
  const auto bank = oracle::markov_bank(oracle::markov(fx.weights), 3);
  const Vector f = random_vector(6, 5);
  const auto parts = wavelet_apply(*fx.markov, 3, f);
  for (std::size_t j = 0; j < bank.size(); ++j) EXPECT_LE(max_diff(parts[j], bank[j] * f), 1e-10);
}

TEST(WaveletTest, SpectralMatchesDenseAssembly) {
  const Fixture fx = make_fixture(6, 6, 3);
  const auto bank = oracle::spectral_bank(oracle::laplacian(fx.weights, 1.0), 3);
  const Vector f = random_vector(6, 7);
  const auto parts = wavelet_apply(*fx.spectral, 3, f);
  for (std::size_t j = 0; j < bank.size(); ++j) EXPECT_LE(max_diff(parts[j], bank[j] * f), 1e-10);
}

TEST(WaveletTest, FirstWaveletKeepsTruncatedEnergy) {
  const Fixture fx = make_fixture(20, 8, 4, 3);
  const Vector f = random_vector(20, 9);
  const Matrix& u = fx.spectral->op().eigenvectors();
  const Vector outside = f - u * (u.transpose() * f);
  const auto parts = wavelet_apply(*fx.spectral, 4, f);
  // Everything orthogonal to the kept eigenvectors passes through W_0 only.
  EXPECT_LE(max_diff(parts[0] - u * (u.transpose() * parts[0]), outside), 1e-10);
  for (std::size_t j = 1; j < parts.size(); ++j) {
    EXPECT_LE(max_diff(u * (u.transpose() * parts[j]), parts[j]), 1e-10);
  }
}

TEST(WaveletTest, NonexpansiveOnFullSpectrum) {
  const Fixture fx = make_fixture(30, 10, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector f = random_vector(30, 100 + trial);
    double energy = 0.0;
    for (const Vector& p : wavelet_apply(*fx.spectral, 8, f)) energy += p.squaredNorm();
    EXPECT_LE(energy, f.squaredNorm() + 1e-9);
  }
}

TEST(WaveletTest, LengthMismatch) {
  const Fixture fx = make_fixture(6, 11, 2);
  EXPECT_MSX_ERROR(wavelet_apply(*fx.markov, 2, Vector(Vector::Ones(5))), ErrorKind::kInput);
}

TEST(SqrtWaveletTest, IsometryOnFullSpectrum) {
  const Fixture fx = make_fixture(30, 12, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector f = random_vector(30, 200 + trial);
    double energy = 0.0;
    for (const Vector& p : sqrt_wavelet_apply(*fx.spectral, 8, f)) energy += p.squaredNorm();
    EXPECT_NEAR(energy, f.squaredNorm(), 1e-8);
  }
}

TEST(SqrtWaveletTest, IsometryWithTruncation) {
  const Fixture fx = make_fixture(30, 13, 6, 7);
  const Vector f = random_vector(30, 14);
  double energy = 0.0;
  for (const Vector& p : sqrt_wavelet_apply(*fx.spectral, 6, f)) energy += p.squaredNorm();
  EXPECT_NEAR(energy, f.squaredNorm(), 1e-8);
}

TEST(SqrtWaveletTest, ConstantEigenvector) {
  const Fixture fx = make_fixture(10, 15, 3);
  const Vector u0 = fx.spectral->op().eigenvectors().col(0);
  const auto parts = sqrt_wavelet_apply(*fx.spectral, 3, u0);
  EXPECT_LE(parts[0].cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LE(max_diff(parts.back(), u0), 1e-7);
}

TEST(SqrtWaveletTest, MatchesDenseAssembly) {
  const Fixture fx = make_fixture(5, 16, 2);
  const auto bank = oracle::sqrt_bank(oracle::laplacian(fx.weights, 1.0), 2);
  const Vector f = random_vector(5, 17);
  const auto parts = sqrt_wavelet_apply(*fx.spectral, 2, f);
  for (std::size_t j = 0; j < bank.size(); ++j) EXPECT_LE(max_diff(parts[j], bank[j] * f), 1e-10);
}

TEST(SqrtWaveletTest, MarkovIsConfigError) {
  const Fixture fx = make_fixture(5, 18, 2);
  EXPECT_MSX_ERROR(sqrt_wavelet_apply(*fx.markov, 2, Vector(Vector::Ones(5))), ErrorKind::kConfig);
}

TEST(LqMomentTest, Examples) {
  EXPECT_DOUBLE_EQ(lq_moment(Vector::Ones(9), 1), 1.0);
  EXPECT_DOUBLE_EQ(lq_moment(Vector::Ones(9), 4), 1.0);
  Vector dirac = Vector::Zero(4);
  dirac(0) = 1.0;
  EXPECT_DOUBLE_EQ(lq_moment(dirac, 1), 0.25);
  Vector v(2);
  v << 3.0, -4.0;
  EXPECT_DOUBLE_EQ(lq_moment(v, 2), 12.5);
}

TEST(ScatteringConfigTest, Validation) {
  ScatteringConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_order = 4;
  EXPECT_MSX_ERROR(cfg.validate(), ErrorKind::kParameter);
  cfg.max_order = 0;
  EXPECT_MSX_ERROR(cfg.validate(), ErrorKind::kParameter);
  cfg = ScatteringConfig{};
  cfg.Q = 0;
  EXPECT_MSX_ERROR(cfg.validate(), ErrorKind::kParameter);
  cfg = ScatteringConfig{};
  cfg.J = -1;
  EXPECT_MSX_ERROR(cfg.validate(), ErrorKind::kParameter);
  cfg = ScatteringConfig{};
  cfg.backend = BackendKind::kMarkov;
  cfg.wavelet = WaveletVariant::kSqrt;
  EXPECT_MSX_ERROR(cfg.validate(), ErrorKind::kConfig);
}

TEST(FeatureLabelTest, CountsAndCanonicalOrder) {
  ScatteringConfig cfg;
  EXPECT_EQ(feature_count(cfg), 184u);
  cfg.max_order = 3;
  EXPECT_EQ(feature_count(cfg), 520u);
  for (int J = 0; J <= 6; ++J) {
    for (int Q = 1; Q <= 3; ++Q) {
      for (int order = 1; order <= 3; ++order) {
        const ScatteringConfig c{J, Q, order};
        const std::size_t m = static_cast<std::size_t>(J + 1);
        std::size_t paths = 1 + m;
        if (order >= 2) paths += m * (m - 1) / 2;
        if (order >= 3) paths += m * (m - 1) * (m - 2) / 6;
        EXPECT_EQ(feature_count(c), paths * static_cast<std::size_t>(Q));
        EXPECT_EQ(feature_labels(c).size(), feature_count(c));
      }
    }
  }
  const auto labels = feature_labels(ScatteringConfig{2, 2, 3});
  std::vector<std::string> text;
  for (const auto& l : labels) text.push_back(l.to_string());
  const std::vector<std::string> expected{
      "S()q1",      "S()q2",      "S(0)q1",     "S(0)q2",     "S(1)q1",   "S(1)q2",
      "S(2)q1",     "S(2)q2",     "S(0,1)q1",   "S(0,1)q2",   "S(0,2)q1", "S(0,2)q2",
      "S(1,2)q1",   "S(1,2)q2",   "S(0,1,2)q1", "S(0,1,2)q2"};
  EXPECT_EQ(text, expected);
}

std::vector<double> as_vector(const FeatureVector& fv) { return fv.values; }

TEST(ScatteringFeaturesTest, MatchesNestedLoopOracle) {
  for (const int order : {1, 2, 3}) {
    const Fixture fx = make_fixture(7, 19, 2);
    const Vector f = random_vector(7, 20);
    const ScatteringConfig cfg{2, 2, order, BackendKind::kMarkov};
    const auto ref = oracle::scattering(oracle::markov_bank(oracle::markov(fx.weights), 2), 2, 2, order, f);
    const auto got = as_vector(scattering_features(*fx.markov, cfg, f));
    ASSERT_EQ(got.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-10) << i;

    const ScatteringConfig scfg{2, 2, order, BackendKind::kSpectral};
    const auto sref = oracle::scattering(oracle::spectral_bank(oracle::laplacian(fx.weights, 1.0), 2), 2, 2, order, f);
    const auto sgot = as_vector(scattering_features(*fx.spectral, scfg, f));
    for (std::size_t i = 0; i < sref.size(); ++i) EXPECT_NEAR(sgot[i], sref[i], 1e-10) << i;
  }
}

TEST(ScatteringFeaturesTest, SqrtVariantMatchesOracle) {
  const Fixture fx = make_fixture(7, 21, 3);
  const Vector f = random_vector(7, 22);
  const ScatteringConfig cfg{3, 2, 2, BackendKind::kSpectral, WaveletVariant::kSqrt};
  const auto ref = oracle::scattering(oracle::sqrt_bank(oracle::laplacian(fx.weights, 1.0), 3), 3, 2, 2, f);
  const auto got = as_vector(scattering_features(*fx.spectral, cfg, f));
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-10) << i;
}

TEST(ScatteringFeaturesTest, ConstantSignalOnMarkov) {
  const Fixture fx = make_fixture(12, 23, 8);
  const ScatteringConfig cfg{8, 4, 3, BackendKind::kMarkov};
  const FeatureVector fv = scattering_features(*fx.markov, cfg, Vector::Ones(12));
  for (std::size_t i = 0; i < fv.size(); ++i) {
    if (fv.labels[i].scales.empty()) {
      EXPECT_NEAR(fv.values[i], 1.0, 1e-12);
    } else {
      EXPECT_LE(std::abs(fv.values[i]), 1e-12);
    }
  }
}

TEST(ScatteringFeaturesTest, NonnegativeAndHomogeneous) {
  const Fixture fx = make_fixture(15, 24, 4);
  const Vector f = random_vector(15, 25);
  const ScatteringConfig cfg{4, 3, 2, BackendKind::kMarkov};
  const FeatureVector a = scattering_features(*fx.markov, cfg, f);
  const FeatureVector b = scattering_features(*fx.markov, cfg, 2.5 * f);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GE(a.values[i], 0.0);
    const double expected = std::pow(2.5, a.labels[i].q) * a.values[i];
    EXPECT_NEAR(b.values[i], expected, 1e-12 * std::max(1.0, expected));
  }
}

TEST(ScatteringFeaturesTest, BatchMatchesSingle) {
  const Fixture fx = make_fixture(10, 26, 5);
  const Matrix signals = oracle::random_matrix(3, 10, 27);
  const ScatteringConfig cfg{5, 3, 3, BackendKind::kSpectral};
  const Matrix batch = scattering_features_batch(*fx.spectral, cfg, signals);
  ASSERT_EQ(batch.rows(), 3);
  for (int s = 0; s < 3; ++s) {
    const auto single = scattering_features(*fx.spectral, cfg, signals.row(s).transpose()).values;
    for (std::size_t i = 0; i < single.size(); ++i) {
      EXPECT_NEAR(batch(s, static_cast<Index>(i)), single[i], 1e-13);
    }
  }
}

TEST(ScatteringFeaturesTest, BackendMismatchIsConfigError) {
  const Fixture fx = make_fixture(6, 28, 2);
  const ScatteringConfig cfg{2, 2, 2, BackendKind::kSpectral};
  EXPECT_MSX_ERROR(scattering_features(*fx.markov, cfg, Vector(Vector::Ones(6))), ErrorKind::kConfig);
}

// Reference for the documented sampler: mt19937_64 draws, rejection to an
// unbiased range, partial Fisher-Yates.
std::vector<std::size_t> reference_sample(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned __int128 two64 = static_cast<unsigned __int128>(1) << 64;
    const std::uint64_t bound = n - i;
    const unsigned __int128 limit = two64 - two64 % bound;
    std::uint64_t x = gen();
    while (static_cast<unsigned __int128>(x) >= limit) x = gen();
    std::swap(a[i], a[i + x % bound]);
  }
  a.resize(count);
  return a;
}

TEST(DiracSignalsTest, MatchesReferenceSampler) {
  const Matrix d = dirac_signals(100, 10, 7);
  const auto ref = reference_sample(100, 10, 7);
  ASSERT_EQ(d.rows(), 10);
  for (int r = 0; r < 10; ++r) {
    EXPECT_EQ(d.row(r).sum(), 1.0);
    EXPECT_EQ(d(r, static_cast<Index>(ref[r])), 1.0);
  }
}

TEST(DiracSignalsTest, FullBasisAndDeterminism) {
  const Matrix d = dirac_signals(12, 12, 3);
  EXPECT_EQ(d.colwise().sum(), Eigen::RowVectorXd::Ones(12));
  EXPECT_EQ(d.rowwise().sum(), Vector::Ones(12));
  EXPECT_EQ(dirac_signals(50, 5, 9), dirac_signals(50, 5, 9));
  EXPECT_NE(dirac_signals(50, 5, 9), dirac_signals(50, 5, 10));
  EXPECT_MSX_ERROR(dirac_signals(5, 6, 1), ErrorKind::kParameter);
}

TEST(ManifoldEmbeddingTest, ConcatAndMean) {
  const Fixture fx = make_fixture(12, 29, 8);
  const ScatteringConfig cfg{8, 4, 2, BackendKind::kMarkov};
  const Matrix signals = oracle::random_matrix(2, 12, 30);
  const FeatureVector concat = manifold_embedding(*fx.markov, cfg, signals, EmbeddingMode::kConcat);
  ASSERT_EQ(concat.size(), 368u);
  EXPECT_EQ(concat.labels[184].signal, 1);
  EXPECT_EQ(concat.labels[184].to_string(), "f1:S()q1");
  for (int s = 0; s < 2; ++s) {
    const auto single = scattering_features(*fx.markov, cfg, signals.row(s).transpose()).values;
    for (std::size_t i = 0; i < 184; ++i) {
      EXPECT_NEAR(concat.values[184 * static_cast<std::size_t>(s) + i], single[i], 1e-13);
    }
  }
  Matrix same(3, 12);
  for (int r = 0; r < 3; ++r) same.row(r) = signals.row(0);
  const FeatureVector mean = manifold_embedding(*fx.markov, cfg, same, EmbeddingMode::kMean);
  const auto single = scattering_features(*fx.markov, cfg, signals.row(0).transpose()).values;
  ASSERT_EQ(mean.size(), 184u);
  for (std::size_t i = 0; i < 184; ++i) EXPECT_NEAR(mean.values[i], single[i], 1e-13);
  EXPECT_MSX_ERROR(manifold_embedding(*fx.markov, cfg, Matrix(0, 12), EmbeddingMode::kMean),
                   ErrorKind::kParameter);
}

}  // namespace
}  // namespace msx
