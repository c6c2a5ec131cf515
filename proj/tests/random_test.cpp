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
#include <random>
#include <set>

#include "msx/errors.hpp"
#include "msx/random.hpp"

namespace msx {
namespace {

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(RngTest, RawStreamIsMersenneTwister64) {
  Rng rng(7);
  std::mt19937_64 ref(7);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(rng.next(), ref());
}

TEST(RngTest, UniformUsesTop53Bits) {
  Rng rng(9);
  std::mt19937_64 ref(9);
  for (int i = 0; i < 10; ++i) {
    const double expected = static_cast<double>(ref() >> 11) / 9007199254740992.0;
    EXPECT_EQ(rng.uniform01(), expected);
  }
}

TEST(RngTest, IndexStaysInRange) {
  Rng rng(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.index(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_THROW(rng.index(0), Error);
}

TEST(RngTest, NormalHasUnitMoments) {
  Rng rng(11);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    ASSERT_TRUE(std::isfinite(v));
    sum += v;
    sq += v * v;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(SampleWithoutReplacementTest, DistinctAndDeterministic) {
  Rng a(5), b(5);
  const auto x = sample_without_replacement(50, 20, a);
  const auto y = sample_without_replacement(50, 20, b);
  EXPECT_EQ(x, y);
  EXPECT_EQ(std::set<std::size_t>(x.begin(), x.end()).size(), 20u);
  for (auto v : x) EXPECT_LT(v, 50u);
}

TEST(SampleWithoutReplacementTest, FullDrawIsPermutation) {
  Rng rng(1);
  auto v = sample_without_replacement(12, 12, rng);
  std::sort(v.begin(), v.end());
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(v[i], i);
}

TEST(SampleWithoutReplacementTest, TooManyIsParameterError) {
  Rng rng(1);
  try {
    sample_without_replacement(3, 4, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParameter);
  }
}

}  // namespace
}  // namespace msx
