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

#include "msx/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msx/errors.hpp"
#include "msx/io.hpp"
#include "msx/random.hpp"

namespace msx {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::span<const unsigned char> bytes, std::size_t offset) {
  if (bytes.size() < offset + 4) {
    throw ParseError(ParseFault::kTruncated, bytes.size(),
                     "IDX header ends at byte " + std::to_string(bytes.size()) +
                         ", expected a 32-bit field at offset " + std::to_string(offset));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void check_magic(std::span<const unsigned char> bytes, std::uint32_t expected) {
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != expected) {
    throw ParseError(ParseFault::kBadMagic, 0,
                     "IDX magic at offset 0 is " + std::to_string(magic) + ", expected " +
                         std::to_string(expected));
  }
}

void check_payload(std::span<const unsigned char> bytes, std::size_t header, std::size_t payload) {
  const std::size_t available = bytes.size() - header;
  if (available < payload) {
    throw ParseError(ParseFault::kTruncated, bytes.size(),
                     "IDX payload needs " + std::to_string(payload) + " bytes after offset " +
                         std::to_string(header) + " but the data ends at offset " +
                         std::to_string(bytes.size()));
  }
  if (available > payload) {
    throw ParseError(ParseFault::kCountMismatch, header + payload,
                     "IDX header accounts for " + std::to_string(payload) +
                         " payload bytes but " + std::to_string(available) + " follow offset " +
                         std::to_string(header));
  }
}

}  // namespace

PointCloud sample_sphere(Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::kParameter, "sphere sample needs at least one point");
  Rng rng(seed);
  Matrix coords(n, 3);
  for (Index i = 0; i < n; ++i) {
    Eigen::Vector3d p;
    double norm = 0.0;
    do {
      p = {rng.normal(), rng.normal(), rng.normal()};
      norm = p.norm();
    } while (norm == 0.0);
    coords.row(i) = (p / norm).transpose();
  }
  return PointCloud(std::move(coords), 2);
}

std::vector<GrayImage> parse_idx_images(std::span<const unsigned char> bytes) {
  check_magic(bytes, kImageMagic);
  const std::size_t count = read_be32(bytes, 4);
  const std::size_t rows = read_be32(bytes, 8);
  const std::size_t cols = read_be32(bytes, 12);
  constexpr std::size_t header = 16;
  check_payload(bytes, header, count * rows * cols);
  std::vector<GrayImage> images(count);
  std::size_t offset = header;
  for (GrayImage& img : images) {
    img.rows = static_cast<int>(rows);
    img.cols = static_cast<int>(cols);
    img.pixels.resize(rows * cols);
    for (double& px : img.pixels) px = bytes[offset++] / 255.0;
  }
  return images;
}

std::vector<int> parse_idx_labels(std::span<const unsigned char> bytes) {
  check_magic(bytes, kLabelMagic);
  const std::size_t count = read_be32(bytes, 4);
  constexpr std::size_t header = 8;
  check_payload(bytes, header, count);
  std::vector<int> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    labels[i] = bytes[header + i];
    if (labels[i] > 9) {
      throw ParseError(ParseFault::kNonNumeric, header + i,
                       "label " + std::to_string(labels[i]) + " at offset " +
                           std::to_string(header + i) + " is not a digit");
    }
  }
  return labels;
}

MnistData load_mnist_idx(const std::filesystem::path& images_path,
                         const std::filesystem::path& labels_path) {
  MnistData data;
  data.images = parse_idx_images(read_binary_file(images_path));
  data.labels = parse_idx_labels(read_binary_file(labels_path));
  if (data.images.size() != data.labels.size()) {
    throw ParseError(ParseFault::kCountMismatch, 4,
                     std::to_string(data.images.size()) + " images but " +
                         std::to_string(data.labels.size()) + " labels");
  }
  return data;
}

Eigen::Matrix3d random_rotation(std::uint64_t seed) {
  Rng rng(seed);
  Eigen::Vector4d v;
  do {
    v = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
  } while (v.norm() == 0.0);
  v.normalize();
  const double w = v(0), x = v(1), y = v(2), z = v(3);
  Eigen::Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
      2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
      2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y);
  return r;
}

PointCloud rotate_cloud(const PointCloud& cloud, const Eigen::Matrix3d& rotation) {
  if (cloud.ambient_dim() != 3) throw Error(ErrorKind::kInput, "rotation needs points in R^3");
  return PointCloud(cloud.coords() * rotation.transpose(), cloud.intrinsic_dim());
}

Vector project_digit(const GrayImage& img, const PointCloud& cloud, const Eigen::Matrix3d& rotation) {
  if (cloud.ambient_dim() != 3) throw Error(ErrorKind::kInput, "projection needs points in R^3");
  for (Index i = 0; i < cloud.size(); ++i) {
    if (std::abs(cloud.point(i).norm() - 1.0) > 1e-6) {
      throw Error(ErrorKind::kInput, "point " + std::to_string(i) + " is not on the unit sphere");
    }
  }
  if (img.rows < 1 || img.cols < 1 ||
      img.pixels.size() != static_cast<std::size_t>(img.rows) * static_cast<std::size_t>(img.cols)) {
    throw Error(ErrorKind::kInput, "image has inconsistent dimensions");
  }
  const Matrix rotated = cloud.coords() * rotation.transpose();
  const double cap_z = std::cos(kCapHalfAngle);
  const double half_width = std::sin(kCapHalfAngle);
  Vector signal = Vector::Zero(cloud.size());
  for (Index i = 0; i < cloud.size(); ++i) {
    const double x = rotated(i, 0);
    const double y = rotated(i, 1);
    if (!(rotated(i, 2) > cap_z)) continue;
    const double u = (x + half_width) / (2.0 * half_width) * img.cols;
    const double v = (half_width - y) / (2.0 * half_width) * img.rows;
    const int col = std::clamp(static_cast<int>(std::floor(u)), 0, img.cols - 1);
    const int row = std::clamp(static_cast<int>(std::floor(v)), 0, img.rows - 1);
    signal(i) = img.at(row, col);
  }
  return signal;
}

std::vector<double> sphere_spectrum_oracle(int l_max) {
  if (l_max < 0) throw Error(ErrorKind::kParameter, "l_max must be nonnegative");
  std::vector<double> out;
  for (int l = 0; l <= l_max; ++l) out.insert(out.end(), 2 * l + 1, double(l) * (l + 1));
  return out;
}

PointCloud load_pointcloud_csv(const std::filesystem::path& path, int intrinsic_dim) {
  return PointCloud(read_matrix_csv(path), intrinsic_dim);
}

Matrix load_signals_csv(const std::filesystem::path& path) {
  Matrix m = read_matrix_csv(path);
  if (!m.allFinite()) throw Error(ErrorKind::kInput, path.string() + ": non-finite signal value");
  return m;
}

LabeledSignals load_labeled_signals(const std::filesystem::path& signals_path,
                                    const std::filesystem::path& labels_path) {
  LabeledSignals out{load_signals_csv(signals_path), read_labels_csv(labels_path)};
  if (static_cast<Index>(out.labels.size()) != out.signals.rows()) {
    throw ParseError(ParseFault::kCountMismatch, 0,
                     std::to_string(out.signals.rows()) + " signals but " +
                         std::to_string(out.labels.size()) + " labels");
  }
  return out;
}

}  // namespace msx
