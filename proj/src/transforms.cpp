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

#include "spartomo/transforms.hpp"

#include <fftw3.h>

#include <bit>
#include <complex>
#include <fstream>
#include <mutex>
#include <random>

namespace spartomo {

TransformKind parse_transform_kind(std::string_view name) {
  if (name == "identity") return TransformKind::identity;
  if (name == "wavelet") return TransformKind::wavelet;
  if (name == "shearlet") return TransformKind::shearlet;
  throw std::invalid_argument("unsupported transform kind '" + std::string(name) + "'");
}

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::identity: return "identity";
    case TransformKind::wavelet: return "wavelet";
    case TransformKind::shearlet: return "shearlet";
  }
  return "unknown";
}

CoeffStack::Location CoeffStack::locate(std::size_t flat) const {
  const std::size_t plane = std::size_t(side) * side;
  if (flat >= values.size()) throw std::out_of_range("CoeffStack::locate: index out of range");
  const auto rem = flat % plane;
  return {int(flat / plane), int(rem / side), int(rem % side)};
}

CoeffStack Transform::analysis(const Image& img) const {
  if (img.side() != side_) throw std::invalid_argument("Transform::analysis: image side mismatch");
  CoeffStack out{sigma(), side_, Vector(coeff_size())};
  analysis(img.span(), out.values);
  return out;
}

Image Transform::adjoint(const CoeffStack& coeffs) const {
  if (coeffs.sigma != sigma() || coeffs.side != side_ || coeffs.values.size() != coeff_size())
    throw std::invalid_argument("Transform::adjoint: coefficient stack shape mismatch");
  Image out(side_);
  adjoint(coeffs.values, out.span());
  return out;
}

void Transform::bind_weights(const TransformSpec& spec) {
  weights_.assign(coeff_size(), 1.0);
  if (spec.weight_mode == WeightMode::uniform) return;
  if (!(spec.besov_p >= 1.0)) throw std::invalid_argument("TransformSpec: besov_p must be >= 1");
  const double exponent = spec.besov_s + 1.0 - 2.0 / spec.besov_p;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    weights_[i] = std::exp2(coefficient_scale(i) * exponent);
}

namespace {

void check_sizes(const Transform& m, std::span<const double> img, std::span<const double> coeffs) {
  if (img.size() != m.image_size() || coeffs.size() != m.coeff_size())
    throw std::invalid_argument("Transform: dimension mismatch");
}

class IdentityTransform final : public Transform {
 public:
  IdentityTransform(const TransformSpec& spec, int side) : Transform(side) { bind_weights(spec); }

  TransformKind kind() const override { return TransformKind::identity; }
  int sigma() const override { return 1; }
  bool orthonormal() const override { return true; }
  double row_energy(std::size_t) const override { return 1.0; }
  int coefficient_scale(std::size_t) const override { return 0; }

  void analysis(std::span<const double> img, std::span<double> coeffs) const override {
    check_sizes(*this, img, coeffs);
    std::copy(img.begin(), img.end(), coeffs.begin());
  }
  void adjoint(std::span<const double> coeffs, std::span<double> img) const override {
    check_sizes(*this, img, coeffs);
    std::copy(coeffs.begin(), coeffs.end(), img.begin());
  }
};

// Orthonormal 2D Haar transform in Mallat layout: the coarsest approximation
// occupies the top-left corner, details of level l (finest first) the three
// quadrants of the (side >> l) block.
class HaarWavelet final : public Transform {
 public:
  HaarWavelet(const TransformSpec& spec, int side) : Transform(side), levels_(spec.levels ? spec.levels : default_wavelet_levels(side)) {
    if (levels_ < 1) throw std::invalid_argument("wavelet: levels must be >= 1");
    if (side % (1 << levels_) != 0)
      throw std::invalid_argument("wavelet: side must be divisible by 2^levels");
    bind_weights(spec);
  }

  TransformKind kind() const override { return TransformKind::wavelet; }
  int sigma() const override { return 1; }
  bool orthonormal() const override { return true; }
  double row_energy(std::size_t) const override { return 1.0; }
  int levels() const { return levels_; }

  int coefficient_scale(std::size_t flat) const override {
    const int n = side();
    const int r = int(flat) / n, c = int(flat) % n;
    const int coarse = n >> levels_;
    if (r < coarse && c < coarse) return 0;
    // Detail at level l (0 = finest) sits where max(r, c) is in [n >> (l+1), n >> l).
    const int m = std::max(r, c);
    int l = 0;
    while ((n >> (l + 1)) > m) ++l;
    return levels_ - l;
  }

  void analysis(std::span<const double> img, std::span<double> coeffs) const override {
    check_sizes(*this, img, coeffs);
    const int n = side();
    std::copy(img.begin(), img.end(), coeffs.begin());
    Vector tmp(std::size_t(n) * n);
    for (int l = 0; l < levels_; ++l) {
      const int m = n >> l, half = m / 2;
      for (int i = 0; i < half; ++i) {
        for (int j = 0; j < half; ++j) {
          const double x00 = coeffs[std::size_t(2 * i) * n + 2 * j];
          const double x01 = coeffs[std::size_t(2 * i) * n + 2 * j + 1];
          const double x10 = coeffs[std::size_t(2 * i + 1) * n + 2 * j];
          const double x11 = coeffs[std::size_t(2 * i + 1) * n + 2 * j + 1];
          tmp[std::size_t(i) * n + j] = 0.5 * (x00 + x01 + x10 + x11);
          tmp[std::size_t(i) * n + j + half] = 0.5 * (x00 - x01 + x10 - x11);
          tmp[std::size_t(i + half) * n + j] = 0.5 * (x00 + x01 - x10 - x11);
          tmp[std::size_t(i + half) * n + j + half] = 0.5 * (x00 - x01 - x10 + x11);
        }
      }
      for (int i = 0; i < m; ++i)
        std::copy_n(tmp.begin() + std::ptrdiff_t(i) * n, m, coeffs.begin() + std::ptrdiff_t(i) * n);
    }
  }

  void adjoint(std::span<const double> coeffs, std::span<double> img) const override {
    check_sizes(*this, img, coeffs);
    const int n = side();
    std::copy(coeffs.begin(), coeffs.end(), img.begin());
    Vector tmp(std::size_t(n) * n);
    for (int l = levels_ - 1; l >= 0; --l) {
      const int m = n >> l, half = m / 2;
      for (int i = 0; i < half; ++i) {
        for (int j = 0; j < half; ++j) {
          const double a = img[std::size_t(i) * n + j];
          const double h = img[std::size_t(i) * n + j + half];
          const double v = img[std::size_t(i + half) * n + j];
          const double d = img[std::size_t(i + half) * n + j + half];
          tmp[std::size_t(2 * i) * n + 2 * j] = 0.5 * (a + h + v + d);
          tmp[std::size_t(2 * i) * n + 2 * j + 1] = 0.5 * (a - h + v - d);
          tmp[std::size_t(2 * i + 1) * n + 2 * j] = 0.5 * (a + h - v - d);
          tmp[std::size_t(2 * i + 1) * n + 2 * j + 1] = 0.5 * (a - h - v + d);
        }
      }
      for (int i = 0; i < m; ++i)
        std::copy_n(tmp.begin() + std::ptrdiff_t(i) * n, m, img.begin() + std::ptrdiff_t(i) * n);
    }
  }

 private:
  int levels_;
};

// Meyer auxiliary function: smooth step from 0 to 1 on [0, 1] with
// meyer_nu(x) + meyer_nu(1 - x) = 1.
double meyer_nu(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

// FFTW's planner is not thread-safe; execution with the new-array API is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    if (p) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(p);
    }
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

using Complex = std::complex<double>;

// Band-limited cone-adapted shearlet frame built in the 2D frequency domain.
//
// Frequencies are normalized to w in [-1, 1]^2. Radial localization uses the
// max-norm r = max(|w1|, |w2|), so the rings are square, matching the
// horizontal/vertical cones. Scale j covers roughly r in [2^{j-J}, 2^{j-J+2}]
// (J = number of scales); the low-pass covers r < 2^{1-J}. Directional
// localization uses the pseudo-angle t: t = w2 / w1 in the horizontal cone
// (|w2| <= |w1|) and t = 2 - w1 / w2 in the vertical cone, so t runs over
// [-1, 3) periodically and slopes (shears) are uniformly spaced within each
// cone. The diagonal seam is shared by the two cones. t depends only on the
// ratio of the frequency components, so every filter is even in w, real, and
// each subband of a real image is real.
//
// With tight = true the windows form a partition of unity of squares and the
// frame is Parseval. Otherwise the windows form a plain partition of unity and
// the canonical frame operator ranges in about [1/4, 1].
class ShearletFrame final : public Transform {
 public:
  ShearletFrame(const TransformSpec& spec, int side)
      : Transform(side), directions_(spec.shear_directions), tight_(spec.tight), half_cols_(side / 2 + 1) {
    if (side < 32) throw std::invalid_argument("shearlet: side must be >= 32");
    if (side % 2 != 0) throw std::invalid_argument("shearlet: side must be even");
    if (directions_.empty()) throw std::invalid_argument("shearlet: at least one scale is required");
    for (int d : directions_)
      if (d < 2) throw std::invalid_argument("shearlet: each scale needs >= 2 directions");
    subband_scale_.push_back(0);
    for (std::size_t j = 0; j < directions_.size(); ++j)
      subband_scale_.insert(subband_scale_.end(), std::size_t(directions_[j]), int(j) + 1);
    sigma_ = int(subband_scale_.size());
    build_filters();
    make_plans();
    bind_weights(spec);
  }

  TransformKind kind() const override { return TransformKind::shearlet; }
  int sigma() const override { return sigma_; }
  bool orthonormal() const override { return false; }
  int coefficient_scale(std::size_t flat) const override { return subband_scale_[flat / image_size()]; }
  double row_energy(std::size_t flat) const override { return row_energy_[flat / image_size()]; }

  void analysis(std::span<const double> img, std::span<double> coeffs) const override {
    check_sizes(*this, img, coeffs);
    const std::size_t nh = spectrum_size();
    std::vector<Complex> spec(nh), tmp(nh);
    Vector in(img.begin(), img.end());
    fftw_execute_dft_r2c(r2c_.get(), in.data(), as_fftw(spec));
    const double norm = 1.0 / double(image_size());
    for (int b = 0; b < sigma_; ++b) {
      const double* filt = filters_.data() + std::size_t(b) * nh;
      for (std::size_t i = 0; i < nh; ++i) tmp[i] = spec[i] * (filt[i] * norm);
      fftw_execute_dft_c2r(c2r_.get(), as_fftw(tmp), coeffs.data() + std::size_t(b) * image_size());
    }
  }

  void adjoint(std::span<const double> coeffs, std::span<double> img) const override {
    check_sizes(*this, img, coeffs);
    const std::size_t nh = spectrum_size();
    std::vector<Complex> acc(nh, Complex(0.0)), tmp(nh);
    Vector band(image_size());
    for (int b = 0; b < sigma_; ++b) {
      std::copy_n(coeffs.begin() + std::ptrdiff_t(b * image_size()), image_size(), band.begin());
      fftw_execute_dft_r2c(r2c_.get(), band.data(), as_fftw(tmp));
      const double* filt = filters_.data() + std::size_t(b) * nh;
      for (std::size_t i = 0; i < nh; ++i) acc[i] += tmp[i] * filt[i];
    }
    const double norm = 1.0 / double(image_size());
    for (auto& v : acc) v *= norm;
    fftw_execute_dft_c2r(c2r_.get(), as_fftw(acc), img.data());
  }

 private:
  static fftw_complex* as_fftw(std::vector<Complex>& v) { return reinterpret_cast<fftw_complex*>(v.data()); }
  std::size_t spectrum_size() const { return std::size_t(side()) * half_cols_; }

  // Radial low-pass profile: 1 on [0, 1], smooth decay to 0 on [1, 2].
  double radial_lowpass(double x) const {
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    const double c = std::cos(0.5 * kPi * meyer_nu(x - 1.0));
    return tight_ ? c : c * c;
  }

  double angular_window(double t, double center, double width) const {
    double d = std::fmod(t - center + 2.0, 4.0);
    if (d < 0.0) d += 4.0;
    d -= 2.0;
    const double x = std::abs(d) / width;
    if (x >= 1.0) return 0.0;
    const double c = std::cos(0.5 * kPi * meyer_nu(x));
    return tight_ ? c : c * c;
  }

  // Window of subband b at normalized frequency (w1, w2).
  double window(int b, double w1, double w2) const {
    const int n_scales = int(directions_.size());
    const double r = std::max(std::abs(w1), std::abs(w2));
    const double r_low = std::exp2(-n_scales);
    auto big_phi = [&](int j) { return radial_lowpass(r / (std::exp2(j) * r_low)); };
    if (b == 0) return big_phi(0);
    int j = 0, k = b - 1;
    while (k >= directions_[std::size_t(j)]) k -= directions_[std::size_t(j++)];
    const double outer = big_phi(j + 1), inner = big_phi(j);
    const double radial = tight_ ? std::sqrt(std::max(outer * outer - inner * inner, 0.0)) : outer - inner;
    if (radial == 0.0) return 0.0;
    double t = 0.0;
    if (std::abs(w2) <= std::abs(w1)) {
      t = w2 / w1;
    } else {
      t = 2.0 - w1 / w2;
    }
    const double width = 4.0 / directions_[std::size_t(j)];
    return radial * angular_window(t, k * width, width);
  }

  void build_filters() {
    const int n = side();
    const std::size_t nh = spectrum_size();
    filters_.assign(std::size_t(sigma_) * nh, 0.0);
    auto freq_row = [n](int r) { return (r < n / 2 ? r : r - n) / (0.5 * n); };
    for (int b = 0; b < sigma_; ++b) {
      double* filt = filters_.data() + std::size_t(b) * nh;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < half_cols_; ++c) filt[std::size_t(r) * half_cols_ + c] = window(b, c / (0.5 * n), freq_row(r));
      // Columns 0 and n/2 hold both a frequency and its negative; make the
      // filter even there so that the implied full spectrum stays Hermitian.
      for (int c : {0, n / 2}) {
        for (int r = 1; r < n / 2; ++r) {
          double& a = filt[std::size_t(r) * half_cols_ + c];
          double& z = filt[std::size_t(n - r) * half_cols_ + c];
          const double sym = tight_ ? std::sqrt(0.5 * (a * a + z * z)) : 0.5 * (a + z);
          a = z = sym;
        }
      }
      // A subband is a circular convolution; each row of M has squared norm
      // sum_k |filter(k)|^2 / n^2 over the full spectrum.
      double e = 0.0;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < half_cols_; ++c) {
          const double v = filt[std::size_t(r) * half_cols_ + c];
          e += (c == 0 || c == n / 2 ? 1.0 : 2.0) * v * v;
        }
      row_energy_.push_back(e / (double(n) * n));
    }
  }

  void make_plans() {
    const int n = side();
    Vector real(image_size());
    std::vector<Complex> cplx(spectrum_size());
    std::lock_guard lock(fftw_planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c_.reset(fftw_plan_dft_r2c_2d(n, n, real.data(), as_fftw(cplx), flags));
    c2r_.reset(fftw_plan_dft_c2r_2d(n, n, as_fftw(cplx), real.data(), flags));
    if (!r2c_ || !c2r_) throw std::runtime_error("shearlet: FFTW planning failed");
  }

  std::vector<int> directions_;
  bool tight_;
  int half_cols_;
  int sigma_ = 1;
  std::vector<int> subband_scale_;
  Vector row_energy_;
  Vector filters_;
  PlanHandle r2c_, c2r_;
};

}  // namespace

int default_wavelet_levels(int side) {
  int log2 = 0;
  while ((1 << (log2 + 1)) <= side) ++log2;
  return std::max(1, log2 - 2);
}

std::shared_ptr<const Transform> make_transform(const TransformSpec& spec, int side) {
  switch (spec.kind) {
    case TransformKind::identity: return std::make_shared<IdentityTransform>(spec, side);
    case TransformKind::wavelet: return std::make_shared<HaarWavelet>(spec, side);
    case TransformKind::shearlet: return std::make_shared<ShearletFrame>(spec, side);
  }
  throw std::invalid_argument("make_transform: unsupported kind");
}

namespace {

// Largest eigenvalue of a symmetric positive semidefinite map by power iteration.
template <class Apply>
double power_iteration(Apply&& apply, std::size_t n, int iters, std::uint64_t seed, const char* what) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector x(n), y(n);
  for (double& v : x) v = gauss(rng);
  double rho = 0.0, prev = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double nx = norm2(x);
    for (double& v : x) v /= nx;
    apply(x, y);
    rho = dot(x, y);
    if (norm2(y) == 0.0) return 0.0;
    if (it > 5 && std::abs(rho - prev) <= 1e-7 * std::abs(rho)) return rho;
    prev = rho;
    x.swap(y);
  }
  throw NumericalError(std::string("frame_bounds: ") + what + " power iteration did not converge");
}

}  // namespace

FrameBounds frame_bounds(const Transform& m, int iters, std::uint64_t seed) {
  Vector coeffs(m.coeff_size());
  auto frame_op = [&](std::span<const double> x, std::span<double> y) {
    m.analysis(x, coeffs);
    m.adjoint(coeffs, y);
  };
  const double upper = power_iteration(frame_op, m.image_size(), iters, seed, "upper");
  auto shifted = [&](std::span<const double> x, std::span<double> y) {
    frame_op(x, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = upper * x[i] - y[i];
  };
  const double gap = power_iteration(shifted, m.image_size(), iters, seed + 1, "lower");
  return {upper - std::max(gap, 0.0), upper};
}

Image dual_frame_reconstruct(const Transform& m, const CoeffStack& coeffs, double tol, int max_iter) {
  if (coeffs.values.size() != m.coeff_size())
    throw std::invalid_argument("dual_frame_reconstruct: coefficient size mismatch");
  const std::size_t n = m.image_size();
  Vector b(n), x(n, 0.0), r(n), p(n), ap(n), tmp(m.coeff_size());
  m.adjoint(coeffs.values, b);
  r = b;
  p = r;
  double rr = dot(r, r);
  const double stop = tol * tol * std::max(rr, 1e-300);
  for (int it = 0; it < max_iter && rr > stop; ++it) {
    m.analysis(p, tmp);
    m.adjoint(tmp, ap);
    const double alpha = rr / dot(p, ap);
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    const double rr_new = dot(r, r);
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + (rr_new / rr) * p[i];
    rr = rr_new;
  }
  return Image(m.side(), std::move(x));
}

void write_coeff_stack(const std::filesystem::path& path, const CoeffStack& coeffs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_coeff_stack: cannot open " + path.string());
  auto put_le = [&out](std::uint64_t bits, int bytes) {
    for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((bits >> (8 * i)) & 0xff));
  };
  put_le(std::uint32_t(coeffs.sigma), 4);
  put_le(std::uint32_t(coeffs.side), 4);
  for (double v : coeffs.values) put_le(std::bit_cast<std::uint64_t>(v), 8);
}

}  // namespace spartomo
