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

#include "spartomo/rate_fit.hpp"

#include <cmath>
#include <stdexcept>

namespace spartomo {

RateFit fit_monomial(std::span<const double> N, std::span<const double> values) {
  if (N.size() != values.size()) throw std::invalid_argument("fit_monomial: size mismatch");
  if (N.size() < 2) throw std::invalid_argument("fit_monomial: need at least two points");
  const double n = double(N.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (!(N[i] > 0.0)) throw std::invalid_argument("fit_monomial: N must be positive");
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw std::invalid_argument("fit_monomial: values must be positive and finite");
    sx += std::log(N[i]);
    sy += std::log(values[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < N.size(); ++i) {
    const double dx = std::log(N[i]) - mx, dy = std::log(values[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_monomial: all N are equal");
  RateFit fit;
  fit.beta_exp = sxy / sxx;
  fit.c = std::exp(my - fit.beta_exp * mx);
  fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return fit;
}

}  // namespace spartomo
