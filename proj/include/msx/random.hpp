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

#ifndef MSX_RANDOM_HPP_
#define MSX_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace msx {

// Seeded generator with fully specified derived distributions.
//
// The standard library's distribution objects are implementation-defined, so
// every draw here is built directly on the raw 64-bit output of
// std::mt19937_64 (which is specified bit for bit):
//
//   uniform01()   (x >> 11) * 2^-53, in [0, 1)
//   index(n)      rejection sampling: draw x until x < 2^64 - (2^64 mod n),
//                 return x mod n
//   normal()      Box-Muller, z = sqrt(-2 ln(1 - u1)) cos(2 pi u2); one
//                 uniform pair per normal, no caching
//
// Results are therefore reproducible across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  std::uint64_t index(std::uint64_t bound);
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Partial Fisher-Yates: for i = 0..count-1, swap position i with
// i + index(n - i) in the identity permutation of [0, n), return the first
// `count` positions.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng);

}  // namespace msx

#endif  // MSX_RANDOM_HPP_
