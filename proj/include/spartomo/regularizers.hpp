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

#include <memory>
#include <span>

#include "spartomo/image.hpp"
#include "spartomo/transforms.hpp"

namespace spartomo {

// Pixels below this value violate the nonnegativity constraint.
inline constexpr double kNonnegTolerance = -1e-12;

struct RegularizerSpec {
  double p = 1.5;
  double alpha = 1.0;
  TransformSpec transform;
  bool nonneg = false;

  // Hoelder conjugate p / (p - 1); +inf for p = 1.
  double q() const;
  void validate() const;
};

// sign(x_i) |x_i|^p
Vector signed_power(std::span<const double> x, double p);

// Coefficient-space pieces of the weighted penalty (1/p) sum_l m_l^p |c_l|^p.
// They take the weights explicitly so they can be used without a transform.
double penalty_value(std::span<const double> c, std::span<const double> m, double p);
// m^p c^{[p-1]}, the gradient for p > 1.
Vector penalty_gradient(std::span<const double> c, std::span<const double> m, double p);
// Convex conjugate of alpha * penalty at nu:
//   p > 1: (alpha^{1-q} / q) sum_l m_l^{-q} |nu_l|^q
//   p = 1: 0 if |nu_l| <= alpha m_l (1 + 1e-12) for all l, else +inf.
double penalty_conjugate(std::span<const double> nu, std::span<const double> m, double p, double alpha);
// Sign selection for p = 1: sign(c_l) where |c_l| is above 1e-12 ||c||_inf,
// otherwise sign(c_other_l) under the same rule, and 0 when both vanish.
Vector p1_sign_selection(std::span<const double> c, std::span<const double> c_other);

// R(f) = (alpha / p) ||M f||_{p,m}^p, optionally with the nonnegativity
// indicator. Immutable; safe to share between threads.
class Regularizer {
 public:
  Regularizer(RegularizerSpec spec, std::shared_ptr<const Transform> transform);
  // Builds the transform from spec.transform for the given side.
  Regularizer(RegularizerSpec spec, int side);

  const RegularizerSpec& spec() const { return spec_; }
  const Transform& transform() const { return *transform_; }
  std::shared_ptr<const Transform> transform_ptr() const { return transform_; }
  double p() const { return spec_.p; }
  double alpha() const { return spec_.alpha; }
  bool nonneg() const { return spec_.nonneg; }

  // +inf when nonneg and some pixel is below kNonnegTolerance.
  double value(std::span<const double> img) const;
  double value(const Image& img) const { return value(img.span()); }
  // Penalty without the indicator.
  double penalty(std::span<const double> img) const;

  // alpha M^T (m^p (M f)^{[p-1]}); requires p > 1.
  Image gradient(const Image& img) const;
  void gradient(std::span<const double> img, std::span<double> out) const;

  // alpha M^T (m zeta) with zeta from p1_sign_selection(M f, M f_tilde); requires p = 1.
  Image subgradient_p1(const Image& f, const Image& f_tilde) const;

  // Symmetric Bregman distance <r_f - r_ft, f - ft> / alpha. For p = 1 the
  // subgradients use the sign selection with the other argument as tie-break.
  // Under nonneg both images must be nonnegative; 0 is taken from the
  // indicator's subdifferential.
  double bregman_distance(const Image& f, const Image& f_tilde) const;

  // Conjugate of the penalty part (without indicator) at dual coefficients nu.
  double conjugate(std::span<const double> nu) const;

 private:
  void check_image(std::span<const double> img, const char* what) const;

  RegularizerSpec spec_;
  std::shared_ptr<const Transform> transform_;
};

}  // namespace spartomo
