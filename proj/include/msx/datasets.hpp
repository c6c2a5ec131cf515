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

#ifndef MSX_DATASETS_HPP_
#define MSX_DATASETS_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "msx/graph.hpp"

namespace msx {

// Signals over a fixed point cloud, one per row (S x N), with class labels.
struct LabeledSignals {
  Matrix signals;
  std::vector<int> labels;
};

// Row-major grayscale image with intensities in [0, 1].
struct GrayImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> pixels;

  double at(int r, int c) const { return pixels[static_cast<std::size_t>(r * cols + c)]; }
};

struct MnistData {
  std::vector<GrayImage> images;
  std::vector<int> labels;
};

// N points uniform on the unit sphere S^2 in R^3 (normalized standard
// Gaussians), intrinsic dimension 2. Throws kParameter for N < 1.
PointCloud sample_sphere(Index n, std::uint64_t seed);

// IDX decoding. Images: big-endian magic 0x00000803, dims count, rows, cols,
// then unsigned bytes scaled by 1/255. Labels: magic 0x00000801, count, bytes
// in 0..9. The payload must match the header exactly. ParseError locations are
// byte offsets.
std::vector<GrayImage> parse_idx_images(std::span<const unsigned char> bytes);
std::vector<int> parse_idx_labels(std::span<const unsigned char> bytes);

// Throws ParseError(kCountMismatch) when the files disagree on the count.
MnistData load_mnist_idx(const std::filesystem::path& images_path,
                         const std::filesystem::path& labels_path);

// Uniform rotation on SO(3): the unit quaternion of four normalized standard
// Gaussians, converted to a matrix.
Eigen::Matrix3d random_rotation(std::uint64_t seed);

// Half-angle of the spherical cap that carries a projected image.
inline constexpr double kCapHalfAngle = 0.78539816339744830962;  // pi / 4

// Samples `img` onto the sphere. The cloud is rotated by R (x -> R x); points
// with z > cos(pi/4) form the cap and are mapped orthographically:
// x in [-sin(pi/4), sin(pi/4)] left to right selects the column, y from top
// (+sin) to bottom (-sin) selects the row, with the pixel containing the
// point (floor of the continuous coordinate, clamped to the image). Points
// off the cap get 0. Throws kInput if any point is off the unit sphere by
// more than 1e-6.
Vector project_digit(const GrayImage& img, const PointCloud& cloud, const Eigen::Matrix3d& rotation);

// Rows of `cloud` mapped through x -> R x.
PointCloud rotate_cloud(const PointCloud& cloud, const Eigen::Matrix3d& rotation);

// Laplace-Beltrami eigenvalues l(l+1) of the unit sphere for l = 0..l_max,
// each repeated 2l+1 times, ascending.
std::vector<double> sphere_spectrum_oracle(int l_max);

// CSV ingestion (comma-separated floats, no header).
PointCloud load_pointcloud_csv(const std::filesystem::path& path, int intrinsic_dim);
Matrix load_signals_csv(const std::filesystem::path& path);

// Throws ParseError(kCountMismatch) unless there is one label per signal row.
LabeledSignals load_labeled_signals(const std::filesystem::path& signals_path,
                                    const std::filesystem::path& labels_path);

}  // namespace msx

#endif  // MSX_DATASETS_HPP_
