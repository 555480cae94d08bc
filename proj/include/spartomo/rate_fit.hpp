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

namespace spartomo {

// Best monomial c N^beta in the log-log least-squares sense.
struct RateFit {
  double c = 0.0;
  double beta_exp = 0.0;
  double r_squared = 0.0;
};

// Needs at least two distinct N and positive values.
RateFit fit_monomial(std::span<const double> N, std::span<const double> values);

}  // namespace spartomo
