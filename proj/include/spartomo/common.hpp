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

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spartomo {

using Vector = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Raised for malformed configuration files or command-line input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an iterative method fails (non-finite values, line-search
// breakdown, non-convergence where convergence is required).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// x -> x^e for x >= 0. The exponent is classified once; integer,
// half-integer and third-integer exponents avoid std::pow, which otherwise
// dominates penalty evaluations.
class AbsPow {
 public:
  explicit AbsPow(double e) : e_(e) {
    auto near_int = [](double v) { return std::abs(v - std::round(v)) < 1e-12; };
    if (e >= 0.0 && e <= 128.0) {
      if (near_int(e)) {
        kind_ = Kind::integer;
        k_ = int(std::round(e));
      } else if (near_int(2.0 * e)) {
        kind_ = Kind::half;
        k_ = int(std::floor(e));
      } else if (near_int(3.0 * e)) {
        const int t = int(std::round(3.0 * e));
        kind_ = t % 3 == 1 ? Kind::third : Kind::two_thirds;
        k_ = t / 3;
      }
    }
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::integer: return ipow(x, k_);
      case Kind::half: return ipow(x, k_) * std::sqrt(x);
      case Kind::third: return ipow(x, k_) * std::cbrt(x);
      case Kind::two_thirds: {
        const double c = std::cbrt(x);
        return ipow(x, k_) * c * c;
      }
      case Kind::general: break;
    }
    // exp(e log x) is several times cheaper than std::pow and accurate to a few ulps here.
    return x == 0.0 ? 0.0 : std::exp(e_ * std::log(x));
  }

 private:
  enum class Kind { general, integer, half, third, two_thirds };
  static double ipow(double b, int k) {
    double r = 1.0;
    for (; k; k >>= 1, b *= b)
      if (k & 1) r *= b;
    return r;
  }
  double e_;
  Kind kind_ = Kind::general;
  int k_ = 0;
};

inline double abs_pow(double x, double e) { return AbsPow(e)(x); }

// Mixes a master seed with up to two cell coordinates (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0, std::uint64_t b = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ (a * 0x632be59bd9b4e019ULL)) ^ (b * 0x85ebca77c2b2ae63ULL));
}

}  // namespace spartomo
