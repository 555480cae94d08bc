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
#include <memory>
#include <span>
#include <string_view>

#include "spartomo/image.hpp"

namespace spartomo {

enum class TransformKind { identity, wavelet, shearlet };

TransformKind parse_transform_kind(std::string_view name);
std::string_view to_string(TransformKind kind);

enum class WeightMode { uniform, besov };

struct TransformSpec {
  TransformKind kind = TransformKind::wavelet;
  // Haar levels; 0 selects log2(side) - 2.
  int levels = 0;
  // Directional subbands per shearlet scale, coarse to fine. One scale per entry.
  std::vector<int> shear_directions{8, 8, 16};
  // Square-root partition of unity in frequency: the shearlet frame is Parseval.
  bool tight = false;
  WeightMode weight_mode = WeightMode::uniform;
  // Smoothness s of the Besov weights 2^{j (s + 1 - 2/p)} (d = 2).
  double besov_s = 0.0;
  double besov_p = 1.5;
};

// Coefficients of all subbands, subband-major: value (b, r, c) lives at
// b * side^2 + r * side + c.
struct CoeffStack {
  int sigma = 1;
  int side = 0;
  Vector values;

  std::size_t size() const { return values.size(); }
  struct Location {
    int subband, row, col;
  };
  Location locate(std::size_t flat) const;
};

// Linear sparsifying transform M: R^{side^2} -> R^{sigma side^2}.
class Transform {
 public:
  virtual ~Transform() = default;

  virtual TransformKind kind() const = 0;
  virtual int sigma() const = 0;
  virtual bool orthonormal() const = 0;
  // Scale index of a coefficient: 0 for the coarse approximation, growing
  // towards fine detail. Drives the Besov weights.
  virtual int coefficient_scale(std::size_t flat) const = 0;

  // Squared norm of each analysis row, diag(M M^T); all ones when orthonormal.
  virtual double row_energy(std::size_t flat) const = 0;

  virtual void analysis(std::span<const double> img, std::span<double> coeffs) const = 0;
  virtual void adjoint(std::span<const double> coeffs, std::span<double> img) const = 0;

  int side() const { return side_; }
  std::size_t image_size() const { return std::size_t(side_) * side_; }
  std::size_t coeff_size() const { return std::size_t(sigma()) * image_size(); }
  // Per-coefficient weights m_lambda > 0.
  const Vector& weights() const { return weights_; }

  CoeffStack analysis(const Image& img) const;
  Image adjoint(const CoeffStack& coeffs) const;

 protected:
  explicit Transform(int side) : side_(side) {}
  void bind_weights(const TransformSpec& spec);

 private:
  int side_;
  Vector weights_;
};

std::shared_ptr<const Transform> make_transform(const TransformSpec& spec, int side);

// Default Haar depth for a side: log2(side) - 2, at least 1.
int default_wavelet_levels(int side);

struct FrameBounds {
  double lower;
  double upper;
};

// Extreme eigenvalues of M^T M: power iteration for the upper bound, power
// iteration on (upper I - M^T M) for the lower one. Throws NumericalError if
// either Rayleigh quotient is still moving after iters steps.
FrameBounds frame_bounds(const Transform& m, int iters = 3000, std::uint64_t seed = 7);

// Canonical dual reconstruction: solves M^T M x = M^T c by conjugate gradients.
Image dual_frame_reconstruct(const Transform& m, const CoeffStack& coeffs, double tol = 1e-13,
                             int max_iter = 500);

// Raw float64 dump preceded by two little-endian int32 (sigma, side).
void write_coeff_stack(const std::filesystem::path& path, const CoeffStack& coeffs);

}  // namespace spartomo
