/*
Copyright 2026 The spartomo Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>

#include "spartomo/image.hpp"

namespace spartomo {

// Projection angles in radians, each in [0, pi) for the experiments.
struct AngleSet {
  std::vector<double> angles;
  std::size_t count() const { return angles.size(); }
};

// n i.i.d. uniform draws from [lo, hi); deterministic for a fixed seed.
AngleSet sample_angles(int n, std::uint64_t seed, double lo = 0.0, double hi = kPi);

// j * pi / n for j = 0..n-1.
AngleSet equispaced_angles(int n);

// One detector row per angle, row-major (angle, detector).
class Sinogram {
 public:
  Sinogram() = default;
  Sinogram(int n_angles, int n_dtc) : n_angles_(n_angles), n_dtc_(n_dtc), values_(std::size_t(n_angles) * n_dtc) {}
  Sinogram(int n_angles, int n_dtc, Vector values);

  int n_angles() const { return n_angles_; }
  int n_dtc() const { return n_dtc_; }
  std::size_t size() const { return values_.size(); }
  double& at(int angle, int dtc) { return values_[std::size_t(angle) * n_dtc_ + dtc]; }
  double at(int angle, int dtc) const { return values_[std::size_t(angle) * n_dtc_ + dtc]; }
  std::span<double> span() { return values_; }
  std::span<const double> span() const { return values_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

 private:
  int n_angles_ = 0;
  int n_dtc_ = 0;
  Vector values_;
};

// Default detector count: ceil(sqrt(2) * side), enough to cover the diagonal.
int default_detector_count(int side);

// Discrete parallel-beam Radon transform on the unit square.
//
// Pixel (r, c) has center ((c + 0.5) h - 0.5, 0.5 - (r + 0.5) h), h = 1 / side.
// A ray at angle phi and detector offset s is {s * theta + t * theta_perp}
// with theta = (cos phi, sin phi), theta_perp = (-sin phi, cos phi).
// Detector cells are centered, spacing sqrt(2) / n_dtc. Each cell value is the
// line integral along its central ray (or the mean over rays_per_cell equally
// spaced rays), evaluated with Joseph's method: the ray is stepped one pixel
// row (or column) at a time and the image is linearly interpolated between
// pixel centers, with zero outside the image. The adjoint reuses the same
// weights, so forward and adjoint are an exact transpose pair.
//
// When the system matrix has at most kMaxCachedWeights nonzeros it is stored
// in compressed row form at construction; larger operators trace rays on the
// fly. Both paths accumulate in the same order and give identical values.
//
// Immutable after construction; forward/adjoint may be called concurrently.
class RadonOperator {
 public:
  RadonOperator(int side, AngleSet angles, std::optional<int> n_dtc = std::nullopt, int rays_per_cell = 1);

  int side() const { return side_; }
  int n_dtc() const { return n_dtc_; }
  int n_angles() const { return int(angles_.count()); }
  const AngleSet& angles() const { return angles_; }
  double detector_spacing() const { return spacing_; }
  double detector_center(int k) const { return (k - 0.5 * (n_dtc_ - 1)) * spacing_; }
  std::size_t image_size() const { return std::size_t(side_) * side_; }
  std::size_t sinogram_size() const { return std::size_t(n_dtc_) * angles_.count(); }

  Sinogram forward(const Image& img) const;
  Image adjoint(const Sinogram& sino) const;

  void forward(std::span<const double> img, std::span<double> sino) const;
  void adjoint(std::span<const double> sino, std::span<double> img) const;

  static constexpr std::size_t kMaxCachedWeights = std::size_t(1) << 22;
  bool cached() const { return !row_start_.empty(); }

  // Largest singular value by power iteration on R^T R.
  double norm_estimate(int iters = 100, std::uint64_t seed = 1) const;

 private:
  template <class Visit>
  void trace_ray(double cos_phi, double sin_phi, double s, double weight, Visit&& visit) const;
  template <class Visit>
  void trace_cell(std::size_t angle, int k, Visit&& visit) const;
  void build_cache();

  int side_;
  AngleSet angles_;
  int n_dtc_;
  int rays_per_cell_;
  double spacing_;
  std::vector<std::uint32_t> row_start_;
  std::vector<std::uint32_t> cols_;
  Vector weights_;
};

// Operator on the equispaced refined grid j * pi / n_ref.
RadonOperator refined_operator(int side, int n_dtc, int n_ref);

// input + delta * N(0, 1) per entry; deterministic for a fixed seed.
Sinogram add_noise(const Sinogram& sino, double delta, std::uint64_t seed);

void write_sinogram_csv(const std::filesystem::path& path, const Sinogram& sino);
void write_sinogram_raw(const std::filesystem::path& path, const Sinogram& sino);

}  // namespace spartomo
