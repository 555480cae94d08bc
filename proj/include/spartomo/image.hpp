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

#include <span>
#include <stdexcept>

#include "spartomo/common.hpp"

namespace spartomo {

// Square n x n image on the unit square, row-major. Row 0 is the top edge.
class Image {
 public:
  Image() = default;

  explicit Image(int side) : side_(check_side(side)), values_(std::size_t(side) * side, 0.0) {}

  Image(int side, Vector values) : side_(check_side(side)), values_(std::move(values)) {
    if (values_.size() != std::size_t(side_) * side_)
      throw std::invalid_argument("Image: value count does not match side^2");
    if (!all_finite(values_)) throw std::invalid_argument("Image: non-finite pixel value");
  }

  int side() const { return side_; }
  std::size_t size() const { return values_.size(); }
  double pixel_size() const { return 1.0 / side_; }

  double& operator()(int row, int col) { return values_[std::size_t(row) * side_ + col]; }
  double operator()(int row, int col) const { return values_[std::size_t(row) * side_ + col]; }

  std::span<double> span() { return values_; }
  std::span<const double> span() const { return values_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  double max() const;
  double min() const;

 private:
  static int check_side(int side) {
    if (side < 2) throw std::invalid_argument("Image: side must be >= 2");
    return side;
  }

  int side_ = 0;
  Vector values_;
};

inline double Image::max() const {
  double m = values_.empty() ? 0.0 : values_[0];
  for (double v : values_) m = std::max(m, v);
  return m;
}

inline double Image::min() const {
  double m = values_.empty() ? 0.0 : values_[0];
  for (double v : values_) m = std::min(m, v);
  return m;
}

}  // namespace spartomo
