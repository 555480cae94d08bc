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
#include <vector>

#include "spartomo/image.hpp"
#include "spartomo/radon.hpp"
#include "spartomo/solvers.hpp"
#include "spartomo/transforms.hpp"

namespace spartomo {

struct SourceElement {
  Vector w;  // sinogram-shaped, on the refined angle grid
  // ||R^T w - grad R(f_dag)|| / ||R^T w||, with grad R(f) = W^T (W f)^{[p-1]}.
  double residual_rel = 0.0;
};

struct StrongScResult {
  Image f_dag;
  SourceElement source;
  // W^T (W R^T w)^{[1/(p-1)]} before rescaling and clipping.
  Image f_raw;
  // Scale applied by the rescaling; w is multiplied by scale^{p-1} to match.
  double scale = 1.0;
};

struct StrongScConfig {
  double p = 1.5;
  // Absolute Tikhonov weight; when <= 0 it is alpha_sc_rel ||R||^2.
  double alpha_sc = 0.0;
  double alpha_sc_rel = 1e-6;
  TransformSpec wavelet;
  SolverConfig solver;
};

// Phantom close to f0 that satisfies W^T (W f)^{[p-1]} = R^T w up to the
// final clipping. w minimizes 1/2 ||R^T w - W^T (W f0)^{[p-1]}||^2 + alpha_sc ||w||^2.
// Requires an orthonormal transform and 1 < p < 2.
StrongScResult build_strong_sc_phantom(const Image& f0, const RadonOperator& refined, const StrongScConfig& cfg);

struct ApproxScConfig {
  double p = 1.5;
  double beta = 1e-3;
  TransformSpec transform;
  std::vector<int> N_values;
  int K = 10;
  std::uint64_t master_seed = 1;
  SolverConfig solver;
  int jobs = 1;
};

struct ApproxScCell {
  int N = 0;
  int k = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
};

struct ApproxScReport {
  double beta = 0.0;
  std::vector<int> N_values;
  std::vector<double> means;
  std::vector<ApproxScCell> cells;
  double fitted_exponent = 0.0;
  double target_exponent = 0.0;  // -q/2
  // Values at beta/10, beta, 10 beta for the first cell; nondecreasing in beta.
  std::vector<double> beta_check;
};

// Largest Hoelder exponent q for which the approximate condition is evaluated.
inline constexpr double kMaxApproxScQ = 10.0;

// inf_w (1/q) ||r - R_theta^T w||_q^q + beta / (2N) ||w||^2 with r = M^T (M f)^{[p-1]}.
double approx_sc_value(std::span<const double> r_dag, const RadonOperator& op, double q, double beta,
                       const SolverConfig& cfg);

// Sample means of the approximate source functional over K angle draws per N
// and their log-log slope. Throws std::invalid_argument when q > kMaxApproxScQ.
ApproxScReport verify_approx_sc(const Image& f_dag, const ApproxScConfig& cfg);

// Rows N,k,seed,value followed by a summary row.
void write_approx_sc_csv(const std::filesystem::path& path, const ApproxScReport& report);

}  // namespace spartomo
