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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spartomo/image.hpp"
#include "spartomo/rate_fit.hpp"
#include "spartomo/regularizers.hpp"
#include "spartomo/solvers.hpp"

namespace spartomo {

enum class NoiseRegime { fixed_noise, decreasing_noise };

NoiseRegime parse_noise_regime(std::string_view name);
std::string_view to_string(NoiseRegime regime);

struct ExperimentConfig {
  NoiseRegime regime = NoiseRegime::fixed_noise;
  int N_min = 16;
  int N_max = 64;
  int N_points = 6;  // log-spaced grid size
  int K = 10;
  // alpha = c_alpha N^{-1/3} (fixed noise) or c_alpha / N (decreasing noise).
  // Unset: grid search over c_alpha_grid.
  std::optional<double> c_alpha;
  // Relative noise level times ||R_ref f||_inf: 0.01 fixed, 0.02 N_min decreasing.
  std::optional<double> c_delta_rel;
  RegularizerSpec reg;  // alpha is overwritten per cell
  std::uint64_t master_seed = 2024;
  int n_ref = 180;
  SolverConfig solver = default_experiment_solver();
  // Tuning: log-spaced c_alpha candidates, pilots at the median N.
  double c_alpha_lo = 1e-4;
  double c_alpha_hi = 1e-1;
  int c_alpha_count = 7;
  int pilots = 3;
  int jobs = 1;

  void validate() const;
  static SolverConfig default_experiment_solver();
};

// Integer N grid, log-spaced between N_min and N_max, strictly increasing.
std::vector<int> n_grid(int N_min, int N_max, int points);
double alpha_for(NoiseRegime regime, double c_alpha, int N);
// Noise standard deviation at N given the refined-grid sinogram peak.
double delta_for(const ExperimentConfig& cfg, double peak, int N);
// ||R_ref f||_inf on n_ref equispaced angles.
double refined_peak(const Image& f, int n_ref);

struct DecayRecord {
  NoiseRegime regime = NoiseRegime::fixed_noise;
  double p = 0.0;
  TransformKind transform = TransformKind::wavelet;
  int N = 0;
  int k = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double delta = 0.0;
  double bregman = 0.0;
  double rel_err_sq = 0.0;
  double objective_final = 0.0;
  std::string status = "ok";
};

// One (N, k) cell: seeded angles and noise, VMILA solve, error metrics.
// Solver failures come back with status set to the error and NaN metrics.
DecayRecord run_cell(const ExperimentConfig& cfg, const Image& f_dag, double peak, double c_alpha, int N, int k,
                     Image* reconstruction = nullptr);

struct TuningResult {
  double c_alpha = 0.0;
  std::vector<double> candidates;
  std::vector<double> mean_metric;
};

// Grid search for c_alpha at the median N of the grid, minimizing the mean
// Bregman distance over cfg.pilots realizations (k = K, K+1, ... so pilots
// never reuse a measured cell). For p = 1 the mean squared relative error is
// used instead: the p = 1 Bregman distance vanishes at the zero reconstruction,
// so it would reward over-regularization.
TuningResult tune_c_alpha(const ExperimentConfig& cfg, const Image& f_dag, double peak);

struct CurvePoint {
  int N = 0;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

struct DecayResult {
  std::vector<DecayRecord> records;
  double c_alpha = 0.0;
  std::optional<TuningResult> tuning;
  std::vector<CurvePoint> bregman_curve;
  std::vector<CurvePoint> error_curve;
  RateFit fit;  // of the Bregman curve
  double theoretical_exponent = 0.0;
};

DecayResult run_decay_experiment(const ExperimentConfig& cfg, const Image& f_dag);

// Mean and sample standard deviation per N over records with status ok.
std::vector<CurvePoint> aggregate(const std::vector<DecayRecord>& records, bool use_bregman);

void write_decay_csv(const std::filesystem::path& path, const std::vector<DecayRecord>& records);

struct GammaRow {
  double p = 0.0;
  double rel_distance = 0.0;
};

struct GammaResult {
  std::vector<GammaRow> rows;
  Image reference;  // p = 1 solution
};

// Solves one fixed problem (shared angles, noise and alpha) for every p in
// p_list and for p = 1, and reports ||f_p - f_1|| / ||f_1||.
GammaResult gamma_convergence_study(const ExperimentConfig& base, const Image& f_dag, int N, double alpha,
                                    const std::vector<double>& p_list);

struct Strategy {
  std::string label;
  double p = 2.0;
  TransformKind transform = TransformKind::wavelet;
  std::optional<double> c_alpha;
};

struct StrategyCurve {
  Strategy strategy;
  double c_alpha = 0.0;
  std::vector<CurvePoint> error_curve;
  // Mean squared relative error at N_max for each seed batch.
  std::vector<double> batch_errors;
};

struct ComparisonResult {
  std::vector<StrategyCurve> curves;
  std::vector<DecayRecord> records;
  int batches = 0;
};

struct CompareOptions {
  int batches = 10;
  int batch_size = 3;
  // Also run the full N grid (cfg.K realizations) for decay curves.
  bool curves = true;
};

// Every strategy sees the same phantom, angles and noise for each (N, k).
// c_alpha is tuned per strategy on the mean squared relative error at the
// median N; when the best value lies on the grid boundary the grid is extended
// outward in the same log steps, up to six steps. Each seed batch draws batch_size fresh realizations at N_max.
ComparisonResult compare_regularizers(const ExperimentConfig& base, const Image& f_dag,
                                      const std::vector<Strategy>& strategies, const CompareOptions& opts);

std::vector<Strategy> default_strategies();

}  // namespace spartomo
