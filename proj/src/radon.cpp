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

#include "spartomo/radon.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "spartomo/phantoms.hpp"

namespace spartomo {

AngleSet sample_angles(int n, std::uint64_t seed, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("sample_angles: n must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("sample_angles: empty interval");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  AngleSet set;
  set.angles.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    double a = dist(rng);
    if (a >= hi) a = std::nextafter(hi, lo);
    set.angles.push_back(a);
  }
  return set;
}

AngleSet equispaced_angles(int n) {
  if (n < 1) throw std::invalid_argument("equispaced_angles: n must be >= 1");
  AngleSet set;
  for (int j = 0; j < n; ++j) set.angles.push_back(j * kPi / n);
  return set;
}

Sinogram::Sinogram(int n_angles, int n_dtc, Vector values)
    : n_angles_(n_angles), n_dtc_(n_dtc), values_(std::move(values)) {
  if (values_.size() != std::size_t(n_angles) * n_dtc)
    throw std::invalid_argument("Sinogram: value count does not match n_angles * n_dtc");
}

int default_detector_count(int side) { return int(std::ceil(std::sqrt(2.0) * side)); }

RadonOperator::RadonOperator(int side, AngleSet angles, std::optional<int> n_dtc, int rays_per_cell)
    : side_(side),
      angles_(std::move(angles)),
      n_dtc_(n_dtc.value_or(default_detector_count(side))),
      rays_per_cell_(rays_per_cell),
      spacing_(std::sqrt(2.0) / n_dtc_) {
  if (side < 2) throw std::invalid_argument("RadonOperator: side must be >= 2");
  if (angles_.count() == 0) throw std::invalid_argument("RadonOperator: empty angle set");
  if (n_dtc_ < default_detector_count(side))
    throw std::invalid_argument("RadonOperator: detector must span the image diagonal");
  if (rays_per_cell_ < 1) throw std::invalid_argument("RadonOperator: rays_per_cell must be >= 1");
  for (double a : angles_.angles)
    if (!std::isfinite(a)) throw std::invalid_argument("RadonOperator: non-finite angle");
  // Each ray touches at most two pixels per row or column.
  const std::size_t bound = sinogram_size() * std::size_t(rays_per_cell_) * 2 * std::size_t(side_);
  if (bound <= kMaxCachedWeights) build_cache();
}

template <class Visit>
void RadonOperator::trace_ray(double cos_phi, double sin_phi, double s, double weight, Visit&& visit) const {
  const double h = 1.0 / side_;
  const int n = side_;
  if (std::abs(cos_phi) >= std::abs(sin_phi)) {
    // Mostly vertical ray: one sample per pixel row, interpolate along x.
    const double step = weight * h / std::abs(cos_phi);
    for (int r = 0; r < n; ++r) {
      const double y = 0.5 - (r + 0.5) * h;
      const double t = (y - s * sin_phi) / cos_phi;
      const double x = s * cos_phi - t * sin_phi;
      const double u = (x + 0.5) / h - 0.5;
      if (u <= -1.0 || u >= n) continue;
      const double fl = std::floor(u);
      const int c0 = int(fl);
      const double a = u - fl;
      const std::size_t row = std::size_t(r) * n;
      if (c0 >= 0) visit(row + c0, (1.0 - a) * step);
      if (c0 + 1 < n) visit(row + c0 + 1, a * step);
    }
  } else {
    // Mostly horizontal ray: one sample per pixel column, interpolate along y.
    const double step = weight * h / std::abs(sin_phi);
    for (int c = 0; c < n; ++c) {
      const double x = (c + 0.5) * h - 0.5;
      const double t = (s * cos_phi - x) / sin_phi;
      const double y = s * sin_phi + t * cos_phi;
      const double v = (0.5 - y) / h - 0.5;
      if (v <= -1.0 || v >= n) continue;
      const double fl = std::floor(v);
      const int r0 = int(fl);
      const double a = v - fl;
      if (r0 >= 0) visit(std::size_t(r0) * n + c, (1.0 - a) * step);
      if (r0 + 1 < n) visit(std::size_t(r0 + 1) * n + c, a * step);
    }
  }
}

template <class Visit>
void RadonOperator::trace_cell(std::size_t angle, int k, Visit&& visit) const {
  const double cs = std::cos(angles_.angles[angle]);
  const double sn = std::sin(angles_.angles[angle]);
  const double ray_weight = 1.0 / rays_per_cell_;
  for (int i = 0; i < rays_per_cell_; ++i) {
    const double s = detector_center(k) + ((i + 0.5) / rays_per_cell_ - 0.5) * spacing_;
    trace_ray(cs, sn, s, ray_weight, visit);
  }
}

void RadonOperator::build_cache() {
  row_start_.reserve(sinogram_size() + 1);
  row_start_.push_back(0);
  for (std::size_t a = 0; a < angles_.count(); ++a) {
    for (int k = 0; k < n_dtc_; ++k) {
      trace_cell(a, k, [&](std::size_t idx, double w) {
        cols_.push_back(std::uint32_t(idx));
        weights_.push_back(w);
      });
      row_start_.push_back(std::uint32_t(cols_.size()));
    }
  }
}

void RadonOperator::forward(std::span<const double> img, std::span<double> sino) const {
  if (img.size() != image_size() || sino.size() != sinogram_size())
    throw std::invalid_argument("RadonOperator::forward: dimension mismatch");
  if (cached()) {
    for (std::size_t j = 0; j < sinogram_size(); ++j) {
      double acc = 0.0;
      for (std::uint32_t e = row_start_[j]; e < row_start_[j + 1]; ++e) acc += weights_[e] * img[cols_[e]];
      sino[j] = acc;
    }
    return;
  }
  for (std::size_t a = 0; a < angles_.count(); ++a) {
    for (int k = 0; k < n_dtc_; ++k) {
      double acc = 0.0;
      trace_cell(a, k, [&](std::size_t idx, double w) { acc += w * img[idx]; });
      sino[a * n_dtc_ + k] = acc;
    }
  }
}

void RadonOperator::adjoint(std::span<const double> sino, std::span<double> img) const {
  if (img.size() != image_size() || sino.size() != sinogram_size())
    throw std::invalid_argument("RadonOperator::adjoint: dimension mismatch");
  std::fill(img.begin(), img.end(), 0.0);
  if (cached()) {
    for (std::size_t j = 0; j < sinogram_size(); ++j) {
      const double g = sino[j];
      if (g == 0.0) continue;
      for (std::uint32_t e = row_start_[j]; e < row_start_[j + 1]; ++e) img[cols_[e]] += weights_[e] * g;
    }
    return;
  }
  for (std::size_t a = 0; a < angles_.count(); ++a) {
    for (int k = 0; k < n_dtc_; ++k) {
      const double g = sino[a * n_dtc_ + k];
      if (g == 0.0) continue;
      trace_cell(a, k, [&](std::size_t idx, double w) { img[idx] += w * g; });
    }
  }
}

Sinogram RadonOperator::forward(const Image& img) const {
  if (img.side() != side_) throw std::invalid_argument("RadonOperator::forward: image side mismatch");
  Sinogram out(n_angles(), n_dtc_);
  forward(img.span(), out.span());
  return out;
}

Image RadonOperator::adjoint(const Sinogram& sino) const {
  if (sino.n_angles() != n_angles() || sino.n_dtc() != n_dtc_)
    throw std::invalid_argument("RadonOperator::adjoint: sinogram shape mismatch");
  Image out(side_);
  adjoint(sino.span(), out.span());
  return out;
}

double RadonOperator::norm_estimate(int iters, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector x(image_size()), y(sinogram_size()), z(image_size());
  for (double& v : x) v = gauss(rng);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double nx = norm2(x);
    for (double& v : x) v /= nx;
    forward(x, y);
    adjoint(y, z);
    lambda = dot(x, z);
    x.swap(z);
  }
  return std::sqrt(lambda);
}

RadonOperator refined_operator(int side, int n_dtc, int n_ref) {
  if (n_ref < 1) throw std::invalid_argument("refined_operator: n_ref must be >= 1");
  return RadonOperator(side, equispaced_angles(n_ref), n_dtc);
}

Sinogram add_noise(const Sinogram& sino, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw std::invalid_argument("add_noise: delta must be >= 0");
  Sinogram out = sino;
  if (delta == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : out.values()) v += delta * gauss(rng);
  return out;
}

void write_sinogram_csv(const std::filesystem::path& path, const Sinogram& sino) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_sinogram_csv: cannot open " + path.string());
  char buf[32];
  for (int a = 0; a < sino.n_angles(); ++a) {
    for (int k = 0; k < sino.n_dtc(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", sino.at(a, k));
      out << (k ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_sinogram_raw(const std::filesystem::path& path, const Sinogram& sino) {
  save_raw_f64(path, sino.span());
}

}  // namespace spartomo
