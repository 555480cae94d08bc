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

#include "spartomo/solvers.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

namespace spartomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double v, std::span<const double> g, const char* who) {
  if (!std::isfinite(v) || !all_finite(g)) throw NumericalError(std::string(who) + ": non-finite objective or gradient");
}

}  // namespace

ScalingMode parse_scaling_mode(std::string_view name) {
  if (name == "identity") return ScalingMode::identity;
  if (name == "gradient_split") return ScalingMode::gradient_split;
  if (name == "objective_diagonal") return ScalingMode::objective_diagonal;
  throw std::invalid_argument("unsupported scaling mode '" + std::string(name) + "'");
}

std::string_view to_string(ScalingMode mode) {
  switch (mode) {
    case ScalingMode::identity: return "identity";
    case ScalingMode::gradient_split: return "gradient_split";
    case ScalingMode::objective_diagonal: return "objective_diagonal";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(std::string("SolverConfig: ") + msg); };
  if (!(eta > 0.0 && eta <= 1.0)) fail("eta must lie in (0, 1]");
  if (!(lambda_min > 0.0 && lambda_min <= lambda0 && lambda0 <= lambda_max)) fail("need 0 < lambda_min <= lambda0 <= lambda_max");
  if (!(L_scale > 1.0)) fail("L_scale must be > 1");
  if (max_outer < 1 || max_inner < 1) fail("iteration limits must be >= 1");
  if (!(tol_rel_obj >= 0.0)) fail("tol_rel_obj must be >= 0");
  if (stall_iters < 1) fail("stall_iters must be >= 1");
  if (!(armijo_beta > 0.0 && armijo_beta < 1.0)) fail("armijo_beta must lie in (0, 1)");
  if (!(armijo_sigma > 0.0 && armijo_sigma < 1.0)) fail("armijo_sigma must lie in (0, 1)");
  if (max_backtracks < 1) fail("max_backtracks must be >= 1");
  if (!(bb_tau > 0.0 && bb_tau < 1.0)) fail("bb_tau must lie in (0, 1)");
  if (bb_memory < 1) fail("bb_memory must be >= 1");
  if (inner_retries < 0) fail("inner_retries must be >= 0");
  if (!(retry_shrink > 0.0 && retry_shrink < 1.0)) fail("retry_shrink must lie in (0, 1)");
}

Bounds Bounds::make(ConstraintKind kind, std::size_t n, double box) {
  Bounds b{Vector(n, -kInf), Vector(n, kInf)};
  switch (kind) {
    case ConstraintKind::none: break;
    case ConstraintKind::nonneg: std::fill(b.lo.begin(), b.lo.end(), 0.0); break;
    case ConstraintKind::nonpos: std::fill(b.hi.begin(), b.hi.end(), 0.0); break;
    case ConstraintKind::box_inf:
      if (!(box >= 0.0)) throw std::invalid_argument("Bounds: box radius must be >= 0");
      std::fill(b.lo.begin(), b.lo.end(), -box);
      std::fill(b.hi.begin(), b.hi.end(), box);
      break;
  }
  return b;
}

void Bounds::project(std::span<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

double Bounds::violation(std::span<const double> x) const {
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) v = std::max({v, lo[i] - x[i], x[i] - hi[i]});
  return v;
}

void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path.string());
  out << "iteration,objective,lambda,mu,inner_iters,h,H,eta_ok,infeasibility\n";
  char buf[256];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%d,%.17g\n", r.iter, r.objective, r.lambda, r.mu,
                  r.inner_iters, r.h, r.H, int(r.eta_ok), r.infeasibility);
    out << buf;
  }
}

Vector scaling_from_split(std::span<const double> x, std::span<const double> v, double L) {
  if (x.size() != v.size()) throw std::invalid_argument("scaling_from_split: size mismatch");
  if (!(L > 1.0)) throw std::invalid_argument("scaling_from_split: L must be > 1");
  Vector d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r;
    if (x[i] == 0.0 && v[i] == 0.0)
      r = 1.0;
    else if (v[i] <= 0.0)
      r = x[i] > 0.0 ? L : 1.0 / L;
    else
      r = x[i] / v[i];
    d[i] = std::clamp(r, 1.0 / L, L);
  }
  return d;
}

Vector scaling_matrix(const Image& iterate, const RadonOperator& op, double L) {
  Sinogram s = op.forward(iterate);
  Image v = op.adjoint(s);
  return scaling_from_split(iterate.span(), v.span(), L);
}

double BBStep::next(std::span<const double> s, std::span<const double> y, std::span<const double> d) {
  const double sy = dot(s, y);
  if (!(sy > 0.0)) return cfg_.lambda_max;
  double sds = 0.0, ydy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double di = d.empty() ? 1.0 : d[i];
    sds += s[i] * s[i] / di;
    ydy += y[i] * y[i] * di;
  }
  if (!(ydy > 0.0)) return cfg_.lambda_max;
  const double bb1 = std::clamp(sds / sy, cfg_.lambda_min, cfg_.lambda_max);
  const double bb2 = std::clamp(sy / ydy, cfg_.lambda_min, cfg_.lambda_max);
  bb2_memory_.push_back(bb2);
  if (int(bb2_memory_.size()) > cfg_.bb_memory) bb2_memory_.pop_front();
  if (bb2 / bb1 < tau_) {
    tau_ *= 0.9;
    return *std::min_element(bb2_memory_.begin(), bb2_memory_.end());
  }
  tau_ *= 1.1;
  return bb1;
}

double bb_steplength(std::span<const double> s, std::span<const double> y, std::span<const double> d,
                     const SolverConfig& cfg) {
  if (norm_inf(s) == 0.0) throw std::invalid_argument("bb_steplength: s must be nonzero");
  BBStep bb(cfg);
  return bb.next(s, y, d);
}

SolverResult sgp_minimize(const SmoothObjective& objective, const Bounds& bounds, ScalingMode scaling,
                          const SolverConfig& cfg, std::span<const double> x0, const SgpStopRule& stop, int max_iter,
                          bool soft_line_search) {
  cfg.validate();
  const std::size_t n = x0.size();
  if (bounds.size() != n) throw std::invalid_argument("sgp_minimize: bounds size mismatch");
  if (!all_finite(x0)) throw std::invalid_argument("sgp_minimize: non-finite starting point");
  if (scaling == ScalingMode::gradient_split && !objective.positive_part)
    throw std::invalid_argument("sgp_minimize: gradient_split scaling needs a gradient split");
  if (scaling == ScalingMode::objective_diagonal && !objective.diagonal)
    throw std::invalid_argument("sgp_minimize: objective_diagonal scaling needs a diagonal");
  if (max_iter <= 0) max_iter = cfg.max_outer;

  SolverResult res;
  Vector& x = res.x;
  x.assign(x0.begin(), x0.end());
  bounds.project(x);
  Vector g(n), xn(n), gn(n), y(n), dir(n), s(n), yv(n), d(n, 1.0), v(n);
  double f = objective.value_grad(x, g);
  require_finite(f, g, "sgp_minimize");

  auto update_scaling = [&] {
    if (scaling == ScalingMode::gradient_split) {
      objective.positive_part(x, g, v);
      d = scaling_from_split(x, v, cfg.L_scale);
    } else if (scaling == ScalingMode::objective_diagonal) {
      objective.diagonal(x, d);
      for (double& e : d) e = std::clamp(e, 1.0 / cfg.L_scale, cfg.L_scale);
    }
  };
  update_scaling();

  BBStep bb(cfg);
  double lambda = cfg.lambda0;
  int stall = 0;
  res.trace.stop_reason = "max_iter";
  for (int k = 1; k <= max_iter; ++k) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] - lambda * d[i] * g[i];
    bounds.project(y);
    for (std::size_t i = 0; i < n; ++i) dir[i] = y[i] - x[i];
    const double slope = dot(g, dir);
    if (norm_inf(dir) == 0.0 || !(slope < 0.0)) {
      res.trace.converged = true;
      res.trace.stop_reason = "stationary";
      break;
    }
    double mu = 1.0, fn = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt, mu *= cfg.armijo_beta) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + mu * dir[i];
      fn = objective.value_grad(xn, gn);
      if (std::isfinite(fn) && fn <= f + cfg.armijo_sigma * mu * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!soft_line_search) throw NumericalError("sgp_minimize: line search failed");
      res.trace.stop_reason = "line_search";
      break;
    }
    require_finite(fn, gn, "sgp_minimize");
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      yv[i] = gn[i] - g[i];
    }
    const double f_prev = f;
    x.swap(xn);
    g.swap(gn);
    f = fn;
    update_scaling();
    res.trace.records.push_back({k, f, lambda, mu, 0, 0.0, 0.0, true, bounds.violation(x)});
    lambda = bb.next(s, yv, d);

    if (stop) {
      if (stop(x, f, k)) {
        res.trace.converged = true;
        res.trace.stop_reason = "criterion";
        break;
      }
      continue;
    }
    const double rel = std::abs(f_prev - f) / std::max(std::abs(f), std::numeric_limits<double>::min());
    stall = rel < cfg.tol_rel_obj ? stall + 1 : 0;
    if (stall >= cfg.stall_iters) {
      res.trace.converged = true;
      res.trace.stop_reason = "rel_obj";
      break;
    }
  }
  res.objective = f;
  res.next_lambda = lambda;
  return res;
}

DataFit::DataFit(std::shared_ptr<const RadonOperator> op, Sinogram data)
    : op_(std::move(op)), data_(std::move(data)) {
  if (!op_) throw std::invalid_argument("DataFit: null operator");
  if (data_.n_angles() != op_->n_angles() || data_.n_dtc() != op_->n_dtc())
    throw std::invalid_argument("DataFit: sinogram shape does not match the operator");
  if (!all_finite(data_.values())) throw std::invalid_argument("DataFit: non-finite data");
  inv_n_ = 1.0 / op_->n_angles();
  rtg_.resize(op_->image_size());
  op_->adjoint(data_.span(), rtg_);
  for (double& v : rtg_) v *= inv_n_;
}

double DataFit::value(std::span<const double> x) const {
  Vector r(op_->sinogram_size());
  op_->forward(x, r);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += (r[i] - data_.values()[i]) * (r[i] - data_.values()[i]);
  return 0.5 * inv_n_ * s;
}

double DataFit::value_grad(std::span<const double> x, std::span<double> grad) const {
  Vector r(op_->sinogram_size());
  op_->forward(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= data_.values()[i];
  op_->adjoint(r, grad);
  for (double& v : grad) v *= inv_n_;
  return 0.5 * inv_n_ * dot(r, r);
}

void DataFit::positive_part(std::span<const double> grad, std::span<double> v) const {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = grad[i] + rtg_[i];
}

ProxResult inexact_prox(const Regularizer& reg, std::span<const double> z, std::span<const double> d, double lambda,
                        const ProxStop& stop, const SolverConfig& cfg, std::span<const double> dual0) {
  const Transform& m = reg.transform();
  const std::size_t n = m.image_size(), nc = m.coeff_size();
  if (z.size() != n || d.size() != n) throw std::invalid_argument("inexact_prox: size mismatch");
  if (!stop.anchor.empty() && stop.anchor.size() != n) throw std::invalid_argument("inexact_prox: anchor size mismatch");
  if (!(lambda > 0.0)) throw std::invalid_argument("inexact_prox: lambda must be > 0");
  const bool nonneg = reg.nonneg();
  const double p = reg.p(), alpha = reg.alpha();
  const Vector& w = m.weights();
  const std::size_t nd = nc + (nonneg ? n : 0);

  Bounds bounds{Vector(nd, -kInf), Vector(nd, kInf)};
  if (p == 1.0) {
    for (std::size_t i = 0; i < nc; ++i) {
      bounds.lo[i] = -alpha * w[i];
      bounds.hi[i] = alpha * w[i];
    }
  } else {
    // The optimal dual is alpha m^p |c|^{p-1} sign(c) with c = (M u*)_i, and
    // |c| <= sqrt(row_energy) ||u*||. Since u = 0 is feasible,
    // ||u* - z||_D <= ||z||_D, which bounds ||u*||. The box is never active at
    // the solution but keeps the stiff conjugate finite for p near 1.
    double zd = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      zd += z[i] * z[i] / d[i];
      dmax = std::max(dmax, d[i]);
    }
    const double ubound = norm2(z) + std::sqrt(zd * dmax);
    for (std::size_t i = 0; i < nc; ++i) {
      const double cmax = std::sqrt(m.row_energy(i)) * ubound;
      const double r = alpha * w[i] * std::max(1.0, std::pow(w[i] * cmax, p - 1.0));
      bounds.lo[i] = -r;
      bounds.hi[i] = r;
    }
  }
  for (std::size_t i = nc; i < nd; ++i) bounds.hi[i] = 0.0;

  // Prox objective at a feasible primal point u with coefficients mu = M u.
  auto primal_value = [&](std::span<const double> u, std::span<const double> mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (u[i] - z[i]) * (u[i] - z[i]) / d[i];
    return s / (2.0 * lambda) + alpha * penalty_value(mu, w, p);
  };
  const double q = reg.spec().q();

  // State of the most recent evaluation, reused by the stopping rule.
  Vector bt(n), u(n), mu(nc);
  auto neg_dual = [&](std::span<const double> nu, std::span<double> grad) {
    m.adjoint(nu.first(nc), bt);
    if (nonneg)
      for (std::size_t i = 0; i < n; ++i) bt[i] += nu[nc + i];
    double quad = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      quad += d[i] * bt[i] * bt[i];
      lin += z[i] * bt[i];
      u[i] = z[i] - lambda * d[i] * bt[i];
    }
    m.analysis(u, mu);
    // Conjugate value and gradient share the power t^{q-1}, t = |nu| / (alpha m).
    double conj = 0.0;
    const AbsPow pw(q - 1.0);
    for (std::size_t i = 0; i < nc; ++i) {
      double gc = 0.0;
      if (p > 1.0 && nu[i] != 0.0) {
        const double t = std::abs(nu[i]) / (alpha * w[i]);
        const double tq1 = pw(t);
        conj += tq1 * t;
        gc = std::copysign(tq1 / w[i], nu[i]);
      }
      grad[i] = gc - mu[i];
    }
    conj *= alpha / q;
    if (p == 1.0) conj = penalty_conjugate(nu.first(nc), w, p, alpha);
    if (nonneg)
      for (std::size_t i = 0; i < n; ++i) grad[nc + i] = -u[i];
    return 0.5 * lambda * quad - lin + conj;
  };

  const double anchor_value = stop.anchor.empty() ? 0.0 : [&] {
    Vector ma(nc);
    m.analysis(stop.anchor, ma);
    return primal_value(stop.anchor, ma);
  }();

  ProxResult out;
  Vector v(n), mv(nc);
  bool satisfied = false;
  auto candidate = [&](std::span<const double> nu, double neg_value) {
    v = u;
    if (nonneg) {
      for (double& e : v) e = std::max(e, 0.0);
      m.analysis(v, mv);
    } else {
      mv = mu;
    }
    out.primal = primal_value(v, mv);
    out.dual_value = -neg_value;
    (void)nu;
  };
  auto rule = [&](std::span<const double> nu, double neg_value, int) {
    candidate(nu, neg_value);
    if (!stop.anchor.empty())
      satisfied = out.primal - anchor_value <= stop.eta * (out.dual_value - anchor_value);
    else
      satisfied = out.primal - out.dual_value <= stop.gap_tol * std::max(1.0, std::abs(out.primal));
    return satisfied;
  };

  Vector nu0(nd, 0.0);
  if (!dual0.empty()) {
    if (dual0.size() != nd) throw std::invalid_argument("inexact_prox: warm-start dual has the wrong size");
    nu0.assign(dual0.begin(), dual0.end());
  }
  SolverConfig inner = cfg;
  inner.lambda0 = std::clamp(stop.step0, cfg.lambda_min, cfg.lambda_max);
  // Inverse diagonal of the dual Hessian, lambda B D B^T + conj'', with the
  // metric of the nu1 block approximated by the mean of d.
  double d_mean = 0.0;
  for (double e : d) d_mean += e;
  d_mean /= double(n);
  Vector quad_diag(nd);
  for (std::size_t i = 0; i < nc; ++i) quad_diag[i] = lambda * d_mean * m.row_energy(i);
  for (std::size_t i = nc; i < nd; ++i) quad_diag[i] = lambda * d[i - nc];
  const AbsPow pw2(q - 2.0);
  auto diagonal = [&](std::span<const double> nu, std::span<double> dd) {
    for (std::size_t i = 0; i < nd; ++i) {
      double h = quad_diag[i];
      if (p > 1.0 && i < nc) h += (q - 1.0) * pw2(std::abs(nu[i]) / (alpha * w[i])) / (alpha * w[i] * w[i]);
      dd[i] = 1.0 / h;
    }
  };
  SmoothObjective obj{neg_dual, {}, diagonal};
  SolverResult r =
      sgp_minimize(obj, bounds, ScalingMode::objective_diagonal, inner, nu0, rule, cfg.max_inner, true);
  out.iterations = int(r.trace.records.size());
  if (!satisfied) {
    // Stationary before the rule fired: evaluate the candidate at the final dual point.
    Vector grad(nd);
    const double val = neg_dual(r.x, grad);
    rule(r.x, val, 0);
  }
  out.v = std::move(v);
  out.dual = std::move(r.x);
  out.satisfied = satisfied;
  out.next_step = r.next_lambda;
  return out;
}

double composite_objective(const CompositeProblem& problem, std::span<const double> x) {
  Vector r(problem.op->sinogram_size());
  problem.op->forward(x, r);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += (r[i] - problem.data.values()[i]) * (r[i] - problem.data.values()[i]);
  return 0.5 * s / problem.op->n_angles() + problem.reg.value(x);
}

SolverResult vmila_minimize(const CompositeProblem& problem, const SolverConfig& cfg, const Image& x0) {
  cfg.validate();
  const Regularizer& reg = problem.reg;
  if (!(reg.p() >= 1.0 && reg.p() <= 2.0)) throw std::invalid_argument("vmila_minimize: p must lie in [1, 2]");
  if (!problem.op) throw std::invalid_argument("vmila_minimize: null operator");
  if (reg.transform().side() != problem.op->side() || x0.side() != problem.op->side())
    throw std::invalid_argument("vmila_minimize: image side mismatch between operator, transform and x0");
  DataFit fit(problem.op, problem.data);
  const std::size_t n = fit.size();
  const bool nonneg = reg.nonneg();
  const ScalingMode scaling = nonneg ? cfg.scaling : ScalingMode::identity;

  SolverResult res;
  Vector& x = res.x;
  x = x0.values();
  if (nonneg) {
    if (x0.min() < kNonnegTolerance) throw std::invalid_argument("vmila_minimize: x0 violates nonnegativity");
    for (double& e : x) e = std::max(e, 0.0);
  }
  Vector g(n), gn(n), xn(n), z(n), dir(n), s(n), yv(n), v(n), d(n, 1.0), dual;
  double f0 = fit.value_grad(x, g);
  double g1 = reg.value(x);
  double F = f0 + g1;
  require_finite(F, g, "vmila_minimize");

  auto update_scaling = [&] {
    if (scaling != ScalingMode::gradient_split) return;
    fit.positive_part(g, v);
    d = scaling_from_split(x, v, cfg.L_scale);
  };
  update_scaling();

  BBStep bb(cfg);
  double lambda = cfg.lambda0, inner_step = 1.0, lambda_cap = cfg.lambda_max;
  int stall = 0;
  res.trace.stop_reason = "max_iter";
  for (int k = 1; k <= cfg.max_outer; ++k) {
    // When the inner solver cannot meet the eta criterion within max_inner,
    // the proximal problem is too hard at this steplength: shrink it and cap
    // later BB proposals there.
    ProxResult prox;
    double h = 0.0, H = 0.0;
    for (int attempt = 0;; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) z[i] = x[i] - lambda * d[i] * g[i];
      ProxStop stop{x, cfg.eta, 0.0, inner_step};
      prox = inexact_prox(reg, z, d, lambda, stop, cfg,
                          cfg.warm_restart ? std::span<const double>(dual) : std::span<const double>());
      // h and H relative to the anchor: shift both by the prox objective at x.
      double anchor = 0.0;
      for (std::size_t i = 0; i < n; ++i) anchor += d[i] * g[i] * g[i];
      anchor = 0.5 * lambda * anchor + g1;
      h = prox.primal - anchor;
      H = prox.dual_value - anchor;
      if (prox.satisfied || H >= 0.0) break;
      if (attempt >= cfg.inner_retries || lambda <= cfg.lambda_min)
        throw NumericalError("vmila_minimize: inner solver hit max_inner before the eta criterion");
      lambda_cap = std::max(cfg.lambda_min, cfg.retry_shrink * lambda);
      lambda = lambda_cap;
    }
    if (!prox.satisfied) {
      res.trace.converged = true;
      res.trace.stop_reason = "stationary";
      break;
    }
    if (cfg.warm_restart) {
      dual = prox.dual;
      inner_step = prox.next_step;
    }
    for (std::size_t i = 0; i < n; ++i) dir[i] = prox.v[i] - x[i];
    if (!(h < 0.0) || norm_inf(dir) == 0.0) {
      res.trace.converged = true;
      res.trace.stop_reason = "stationary";
      break;
    }
    double mu = 1.0, fn0 = 0.0, gn1 = 0.0, Fn = 0.0;
    for (int bt = 0;; ++bt) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + mu * dir[i];
      fn0 = fit.value_grad(xn, gn);
      gn1 = reg.value(xn);
      Fn = fn0 + gn1;
      if (std::isfinite(Fn) && Fn <= F + cfg.armijo_sigma * mu * h) break;
      if (bt + 1 >= cfg.max_backtracks) throw NumericalError("vmila_minimize: line search failed");
      mu *= cfg.armijo_beta;
    }
    require_finite(Fn, gn, "vmila_minimize");
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      yv[i] = gn[i] - g[i];
    }
    const double F_prev = F;
    x.swap(xn);
    g.swap(gn);
    F = Fn;
    g1 = gn1;
    update_scaling();
    double infeas = 0.0;
    if (nonneg)
      for (double e : x) infeas = std::max(infeas, -e);
    res.trace.records.push_back({k, F, lambda, mu, prox.iterations, h, H, h <= cfg.eta * H, infeas});
    lambda = std::min(bb.next(s, yv, d), lambda_cap);

    const double rel = std::abs(F_prev - F) / std::max(std::abs(F), std::numeric_limits<double>::min());
    stall = rel < cfg.tol_rel_obj ? stall + 1 : 0;
    if (stall >= cfg.stall_iters) {
      res.trace.converged = true;
      res.trace.stop_reason = "rel_obj";
      break;
    }
  }
  res.objective = F;
  return res;
}

}  // namespace spartomo
