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

#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "spartomo/radon.hpp"
#include "spartomo/regularizers.hpp"

namespace spartomo {

enum class ScalingMode { identity, gradient_split, objective_diagonal };
enum class ConstraintKind { none, nonneg, box_inf, nonpos };

ScalingMode parse_scaling_mode(std::string_view name);
std::string_view to_string(ScalingMode mode);

struct SolverConfig {
  double eta = 1e-5;
  double lambda_min = 1e-5;
  double lambda_max = 1e5;
  double lambda0 = 1.3;
  double L_scale = 1e10;
  int max_outer = 500;
  int max_inner = 500;
  double tol_rel_obj = 1e-8;
  // Consecutive iterations below tol_rel_obj before stopping.
  int stall_iters = 3;
  double armijo_beta = 0.5;
  double armijo_sigma = 1e-4;
  int max_backtracks = 50;
  bool warm_restart = true;
  // Retries of a proximal step whose inner solve hit max_inner, each with the
  // outer steplength multiplied by retry_shrink; later steps stay capped there.
  int inner_retries = 6;
  double retry_shrink = 0.1;
  // Adaptive BB: switch threshold and memory of recent BB2 values.
  double bb_tau = 0.5;
  int bb_memory = 3;
  // Scaling of the outer VMILA iterations. gradient_split needs a
  // nonnegative iterate and falls back to identity on unconstrained problems.
  ScalingMode scaling = ScalingMode::identity;

  void validate() const;
};

// Per-entry bounds lo_i <= x_i <= hi_i. With a diagonal metric the scaled
// projection onto such a set is plain clamping.
struct Bounds {
  Vector lo, hi;

  static Bounds make(ConstraintKind kind, std::size_t n, double box = 0.0);
  std::size_t size() const { return lo.size(); }
  void project(std::span<double> x) const;
  // Largest bound violation (0 when feasible).
  double violation(std::span<const double> x) const;
};

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  int inner_iters = 0;
  // VMILA only: h at the inexact prox point and the dual value H.
  double h = 0.0;
  double H = 0.0;
  bool eta_ok = true;
  double infeasibility = 0.0;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  bool converged = false;
  std::string stop_reason;
};

void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace);

struct SolverResult {
  Vector x;
  double objective = 0.0;
  // Steplength the next iteration would have used.
  double next_lambda = 0.0;
  SolverTrace trace;
};

// Smooth objective for SGP: value_grad returns the value and writes the
// gradient. positive_part (optional) writes V >= 0 of a split grad = V - U
// with U >= 0, used by gradient_split scaling. diagonal (optional) writes a
// positive diagonal scaling at x, used by objective_diagonal scaling.
struct SmoothObjective {
  std::function<double(std::span<const double>, std::span<double>)> value_grad;
  std::function<void(std::span<const double> x, std::span<const double> grad, std::span<double> v)> positive_part;
  std::function<void(std::span<const double> x, std::span<double> d)> diagonal;
};

// d_i = min(L, max(1/L, x_i / v_i)), with 0/0 mapped to 1.
Vector scaling_from_split(std::span<const double> x, std::span<const double> v, double L);
// Same with v = R^T R x.
Vector scaling_matrix(const Image& iterate, const RadonOperator& op, double L);

// Adaptive alternation of scaled Barzilai-Borwein rules with
// BB1 = <s, D^{-1} s> / <s, y> and BB2 = <s, y> / <y, D y>.
class BBStep {
 public:
  explicit BBStep(const SolverConfig& cfg) : cfg_(cfg), tau_(cfg.bb_tau) {}
  double next(std::span<const double> s, std::span<const double> y, std::span<const double> d);
  double tau() const { return tau_; }

 private:
  SolverConfig cfg_;
  double tau_;
  std::deque<double> bb2_memory_;
};

// One-shot BB value with fresh state; d empty means identity scaling.
double bb_steplength(std::span<const double> s, std::span<const double> y, std::span<const double> d,
                     const SolverConfig& cfg);

// Called after every accepted SGP iterate; returning true stops the solver.
using SgpStopRule = std::function<bool(std::span<const double> x, double value, int iter)>;

// Scaled gradient projection with BB steplengths and monotone Armijo
// backtracking. Stops on the relative objective change rule (or the custom
// rule when given), a zero projected step, or max_iter (cfg.max_outer if 0).
// A failed line search throws unless soft_line_search, in which case the
// solver stops with reason "line_search" at the last accepted iterate.
SolverResult sgp_minimize(const SmoothObjective& objective, const Bounds& bounds, ScalingMode scaling,
                          const SolverConfig& cfg, std::span<const double> x0, const SgpStopRule& stop = {},
                          int max_iter = 0, bool soft_line_search = false);

// (1 / (2N)) ||R f - g||^2 with N the number of angles.
class DataFit {
 public:
  DataFit(std::shared_ptr<const RadonOperator> op, Sinogram data);

  const RadonOperator& op() const { return *op_; }
  const Sinogram& data() const { return data_; }
  std::size_t size() const { return op_->image_size(); }
  double value(std::span<const double> x) const;
  double value_grad(std::span<const double> x, std::span<double> grad) const;
  // R^T R x / N recovered from the gradient: grad + R^T g / N.
  void positive_part(std::span<const double> grad, std::span<double> v) const;

 private:
  std::shared_ptr<const RadonOperator> op_;
  Sinogram data_;
  double inv_n_;
  Vector rtg_;
};

struct CompositeProblem {
  std::shared_ptr<const RadonOperator> op;
  Sinogram data;
  Regularizer reg;
};

// Dual solution of the scaled proximal problem
//   min_u (1 / (2 lambda)) ||u - z||^2_{D^{-1}} + G(u),   G = alpha pen(M u) (+ nonneg),
// with D = diag(d). The dual variable is (nu1, nu2) for B = [M; I] when the
// regularizer is nonnegativity-constrained, nu1 alone otherwise.
struct ProxResult {
  Vector v;       // primal candidate, projected onto the feasible set
  Vector dual;    // final dual iterate (reuse for warm restart)
  int iterations = 0;
  double primal = 0.0;  // prox objective at v
  double dual_value = 0.0;
  bool satisfied = false;  // stopping rule met
  double next_step = 1.0;  // inner steplength for a warm restart
};

struct ProxStop {
  // With an anchor x: stop once h(v) <= eta H(nu), where h and H are the
  // primal and dual prox objectives shifted by their value at x.
  // Without one: stop once primal - dual <= gap_tol * max(1, |primal|).
  std::span<const double> anchor;
  double eta = 1e-5;
  double gap_tol = 1e-12;
  // Initial steplength of the inner solver.
  double step0 = 1.0;
};

ProxResult inexact_prox(const Regularizer& reg, std::span<const double> z, std::span<const double> d, double lambda,
                        const ProxStop& stop, const SolverConfig& cfg, std::span<const double> dual0 = {});

// Variable-metric inexact line-search algorithm for
//   (1 / (2N)) ||R f - g||^2 + alpha pen(M f) (+ nonneg).
SolverResult vmila_minimize(const CompositeProblem& problem, const SolverConfig& cfg, const Image& x0);

// Objective of the composite problem (+inf when infeasible).
double composite_objective(const CompositeProblem& problem, std::span<const double> x);

}  // namespace spartomo
