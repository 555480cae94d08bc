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

#include "spartomo/regularizers.hpp"

#include <limits>

namespace spartomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_weights(std::span<const double> c, std::span<const double> m) {
  if (c.size() != m.size()) throw std::invalid_argument("penalty: coefficient/weight size mismatch");
}

}  // namespace

double RegularizerSpec::q() const { return p == 1.0 ? kInf : p / (p - 1.0); }

void RegularizerSpec::validate() const {
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("regularizer: p must lie in [1, 2]");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("regularizer: alpha must be > 0");
}

Vector signed_power(std::span<const double> x, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("signed_power: p must be > 0");
  Vector out(x.size());
  const AbsPow pw(p);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sgn(x[i]) * pw(std::abs(x[i]));
  return out;
}

double penalty_value(std::span<const double> c, std::span<const double> m, double p) {
  check_weights(c, m);
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < c.size(); ++i) s += m[i] * std::abs(c[i]);
    return s;
  }
  if (p == 2.0) {
    for (std::size_t i = 0; i < c.size(); ++i) s += m[i] * m[i] * c[i] * c[i];
    return 0.5 * s;
  }
  const AbsPow pw(p);
  for (std::size_t i = 0; i < c.size(); ++i) s += pw(m[i] * std::abs(c[i]));
  return s / p;
}

Vector penalty_gradient(std::span<const double> c, std::span<const double> m, double p) {
  check_weights(c, m);
  if (!(p > 1.0)) throw std::invalid_argument("penalty_gradient: p must be > 1 (use the p = 1 sign selection)");
  Vector g(c.size());
  const AbsPow pw(p), pw1(p - 1.0);
  for (std::size_t i = 0; i < c.size(); ++i) g[i] = c[i] == 0.0 ? 0.0 : pw(m[i]) * sgn(c[i]) * pw1(std::abs(c[i]));
  return g;
}

double penalty_conjugate(std::span<const double> nu, std::span<const double> m, double p, double alpha) {
  check_weights(nu, m);
  if (p == 1.0) {
    for (std::size_t i = 0; i < nu.size(); ++i)
      if (std::abs(nu[i]) > alpha * m[i] * (1.0 + 1e-12)) return kInf;
    return 0.0;
  }
  const double q = p / (p - 1.0);
  double s = 0.0;
  // (alpha^{1-q}/q) |nu|^q m^{-q} written as (alpha/q) (|nu| / (alpha m))^q to avoid overflow for large q.
  const AbsPow pw(q);
  for (std::size_t i = 0; i < nu.size(); ++i) s += pw(std::abs(nu[i]) / (alpha * m[i]));
  return alpha * s / q;
}

Vector p1_sign_selection(std::span<const double> c, std::span<const double> c_other) {
  if (c.size() != c_other.size()) throw std::invalid_argument("p1_sign_selection: size mismatch");
  const double tc = 1e-12 * norm_inf(c), to = 1e-12 * norm_inf(c_other);
  Vector zeta(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > tc)
      zeta[i] = sgn(c[i]);
    else if (std::abs(c_other[i]) > to)
      zeta[i] = sgn(c_other[i]);
    else
      zeta[i] = 0.0;
  }
  return zeta;
}

Regularizer::Regularizer(RegularizerSpec spec, std::shared_ptr<const Transform> transform)
    : spec_(std::move(spec)), transform_(std::move(transform)) {
  spec_.validate();
  if (!transform_) throw std::invalid_argument("Regularizer: null transform");
}

Regularizer::Regularizer(RegularizerSpec spec, int side)
    : Regularizer(spec, make_transform(spec.transform, side)) {}

void Regularizer::check_image(std::span<const double> img, const char* what) const {
  if (img.size() != transform_->image_size())
    throw std::invalid_argument(std::string("Regularizer::") + what + ": image size mismatch");
}

double Regularizer::penalty(std::span<const double> img) const {
  check_image(img, "penalty");
  Vector c(transform_->coeff_size());
  transform_->analysis(img, c);
  return spec_.alpha * penalty_value(c, transform_->weights(), spec_.p);
}

double Regularizer::value(std::span<const double> img) const {
  if (spec_.nonneg)
    for (double v : img)
      if (v < kNonnegTolerance) return kInf;
  return penalty(img);
}

void Regularizer::gradient(std::span<const double> img, std::span<double> out) const {
  check_image(img, "gradient");
  if (!(spec_.p > 1.0)) throw std::invalid_argument("Regularizer::gradient: p = 1 is not differentiable");
  Vector c(transform_->coeff_size());
  transform_->analysis(img, c);
  Vector g = penalty_gradient(c, transform_->weights(), spec_.p);
  for (double& v : g) v *= spec_.alpha;
  transform_->adjoint(g, out);
}

Image Regularizer::gradient(const Image& img) const {
  Image out(img.side());
  gradient(img.span(), out.span());
  return out;
}

Image Regularizer::subgradient_p1(const Image& f, const Image& f_tilde) const {
  check_image(f.span(), "subgradient_p1");
  check_image(f_tilde.span(), "subgradient_p1");
  if (spec_.p != 1.0) throw std::invalid_argument("Regularizer::subgradient_p1: requires p = 1");
  Vector cf(transform_->coeff_size()), ct(transform_->coeff_size());
  transform_->analysis(f.span(), cf);
  transform_->analysis(f_tilde.span(), ct);
  Vector zeta = p1_sign_selection(cf, ct);
  const Vector& m = transform_->weights();
  for (std::size_t i = 0; i < zeta.size(); ++i) zeta[i] *= spec_.alpha * m[i];
  Image out(f.side());
  transform_->adjoint(zeta, out.span());
  return out;
}

double Regularizer::bregman_distance(const Image& f, const Image& f_tilde) const {
  check_image(f.span(), "bregman_distance");
  check_image(f_tilde.span(), "bregman_distance");
  if (spec_.nonneg && (f.min() < kNonnegTolerance || f_tilde.min() < kNonnegTolerance))
    throw std::invalid_argument("bregman_distance: negative pixel under nonnegativity constraint");
  Image rf, rt;
  if (spec_.p == 1.0) {
    rf = subgradient_p1(f, f_tilde);
    rt = subgradient_p1(f_tilde, f);
  } else {
    rf = gradient(f);
    rt = gradient(f_tilde);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) d += (rf.values()[i] - rt.values()[i]) * (f.values()[i] - f_tilde.values()[i]);
  return d / spec_.alpha;
}

double Regularizer::conjugate(std::span<const double> nu) const {
  if (nu.size() != transform_->coeff_size()) throw std::invalid_argument("Regularizer::conjugate: size mismatch");
  return penalty_conjugate(nu, transform_->weights(), spec_.p, spec_.alpha);
}

}  // namespace spartomo
