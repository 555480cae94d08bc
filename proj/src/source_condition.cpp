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

#include "spartomo/source_condition.hpp"

#include <cstdio>
#include <fstream>

#include "spartomo/parallel.hpp"
#include "spartomo/phantoms.hpp"
#include "spartomo/rate_fit.hpp"
#include "spartomo/regularizers.hpp"

namespace spartomo {

namespace {

// M^T (m^p (M f)^{[p-1]}), the unscaled regularizer gradient.
Vector reg_gradient(const Transform& m, std::span<const double> f, double p) {
  Vector c(m.coeff_size()), out(m.image_size());
  m.analysis(f, c);
  const Vector g = penalty_gradient(c, m.weights(), p);
  m.adjoint(g, out);
  return out;
}

}  // namespace

StrongScResult build_strong_sc_phantom(const Image& f0, const RadonOperator& refined, const StrongScConfig& cfg) {
  const double p = cfg.p;
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("build_strong_sc_phantom: p must lie in (1, 2)");
  if (f0.side() != refined.side()) throw std::invalid_argument("build_strong_sc_phantom: side mismatch");
  if (!(cfg.alpha_sc > 0.0 || cfg.alpha_sc_rel > 0.0))
    throw std::invalid_argument("build_strong_sc_phantom: alpha_sc must be > 0");
  if (!(f0.max() > 0.0)) throw std::invalid_argument("build_strong_sc_phantom: f0 has no positive pixel");
  auto transform = make_transform(cfg.wavelet, f0.side());
  if (!transform->orthonormal())
    throw std::invalid_argument(
        "build_strong_sc_phantom: the transform is not orthonormal, so the source condition cannot be inverted");
  const Transform& m = *transform;
  const std::size_t n = f0.size(), ns = refined.sinogram_size();

  const Vector r0 = reg_gradient(m, f0.span(), p);
  double alpha_sc = cfg.alpha_sc;
  if (alpha_sc <= 0.0) {
    const double nr = refined.norm_estimate();
    alpha_sc = cfg.alpha_sc_rel * nr * nr;
  }

  // 1/2 ||R^T w - r0||^2 + alpha_sc ||w||^2
  Vector rtw(n);
  SmoothObjective tik;
  tik.value_grad = [&](std::span<const double> w, std::span<double> grad) {
    refined.adjoint(w, rtw);
    for (std::size_t i = 0; i < n; ++i) rtw[i] -= r0[i];
    refined.forward(rtw, grad);
    for (std::size_t j = 0; j < ns; ++j) grad[j] += 2.0 * alpha_sc * w[j];
    return 0.5 * dot(rtw, rtw) + alpha_sc * dot(w, w);
  };
  SolverResult sol = sgp_minimize(tik, Bounds::make(ConstraintKind::none, ns), ScalingMode::identity, cfg.solver,
                                  Vector(ns, 0.0));

  StrongScResult out;
  out.source.w = std::move(sol.x);
  refined.adjoint(out.source.w, rtw);
  // f = M^T ((M R^T w) / m^p)^{[1/(p-1)]} inverts the gradient for orthonormal M.
  Vector c(m.coeff_size()), raw(n);
  m.analysis(rtw, c);
  const Vector& wt = m.weights();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double v = c[i] / std::pow(wt[i], p);
    c[i] = std::copysign(std::pow(std::abs(v), 1.0 / (p - 1.0)), v);
  }
  m.adjoint(c, raw);
  out.f_raw = Image(f0.side(), raw);
  const double peak = out.f_raw.max();
  if (!(peak > 0.0)) throw NumericalError("build_strong_sc_phantom: reconstructed phantom has no positive pixel");
  out.scale = 1.0 / peak;
  out.f_dag = rescale_clip(out.f_raw);
  // grad R is (p-1)-homogeneous, so rescaling f by s rescales w by s^{p-1}.
  const double ws = std::pow(out.scale, p - 1.0);
  for (double& e : out.source.w) e *= ws;
  for (double& e : rtw) e *= ws;
  const Vector g = reg_gradient(m, out.f_dag.span(), p);
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) num += (rtw[i] - g[i]) * (rtw[i] - g[i]);
  const double den = norm2(rtw);
  out.source.residual_rel = den > 0.0 ? std::sqrt(num) / den : 0.0;
  return out;
}

double approx_sc_value(std::span<const double> r_dag, const RadonOperator& op, double q, double beta,
                       const SolverConfig& cfg) {
  if (!(q >= 2.0)) throw std::invalid_argument("approx_sc_value: q must be >= 2");
  if (!(beta > 0.0)) throw std::invalid_argument("approx_sc_value: beta must be > 0");
  if (r_dag.size() != op.image_size()) throw std::invalid_argument("approx_sc_value: size mismatch");
  const std::size_t n = op.image_size(), ns = op.sinogram_size();
  const double reg = beta / op.n_angles();
  const AbsPow pw(q - 1.0);
  Vector res(n);
  SmoothObjective obj;
  obj.value_grad = [&](std::span<const double> w, std::span<double> grad) {
    op.adjoint(w, res);
    double fit = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = r_dag[i] - res[i];
      const double a = pw(std::abs(r));
      fit += a * std::abs(r);
      res[i] = -std::copysign(a, r);
    }
    op.forward(res, grad);
    for (std::size_t j = 0; j < ns; ++j) grad[j] += reg * w[j];
    return fit / q + 0.5 * reg * dot(w, w);
  };
  SolverResult sol = sgp_minimize(obj, Bounds::make(ConstraintKind::none, ns), ScalingMode::identity, cfg,
                                  Vector(ns, 0.0));
  return sol.objective;
}

ApproxScReport verify_approx_sc(const Image& f_dag, const ApproxScConfig& cfg) {
  const double p = cfg.p;
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("verify_approx_sc: p must lie in (1, 2)");
  const double q = p / (p - 1.0);
  if (q > kMaxApproxScQ)
    throw std::invalid_argument("verify_approx_sc: q = " + std::to_string(q) +
                                " is too large for a stable evaluation of the q-power data term");
  if (cfg.K < 1) throw std::invalid_argument("verify_approx_sc: K must be >= 1");
  if (cfg.N_values.empty()) throw std::invalid_argument("verify_approx_sc: empty N list");
  for (int N : cfg.N_values)
    if (N < 1) throw std::invalid_argument("verify_approx_sc: N values must be >= 1");
  if (!(cfg.beta > 0.0)) throw std::invalid_argument("verify_approx_sc: beta must be > 0");

  auto transform = make_transform(cfg.transform, f_dag.side());
  const Vector r_dag = reg_gradient(*transform, f_dag.span(), p);

  ApproxScReport rep;
  rep.beta = cfg.beta;
  rep.N_values = cfg.N_values;
  rep.target_exponent = -q / 2.0;
  const std::size_t nN = cfg.N_values.size(), K = std::size_t(cfg.K);
  rep.cells.resize(nN * K);
  parallel_for(nN * K, cfg.jobs, [&](std::size_t idx) {
    ApproxScCell& cell = rep.cells[idx];
    cell.N = cfg.N_values[idx / K];
    cell.k = int(idx % K);
    cell.seed = derive_seed(cfg.master_seed, std::uint64_t(cell.N), std::uint64_t(cell.k));
    RadonOperator op(f_dag.side(), sample_angles(cell.N, cell.seed));
    cell.value = approx_sc_value(r_dag, op, q, cfg.beta, cfg.solver);
  });
  Vector Ns;
  for (std::size_t i = 0; i < nN; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k) s += rep.cells[i * K + k].value;
    rep.means.push_back(s / double(K));
    Ns.push_back(cfg.N_values[i]);
  }
  if (nN >= 2) rep.fitted_exponent = fit_monomial(Ns, rep.means).beta_exp;

  const ApproxScCell& first = rep.cells.front();
  RadonOperator op(f_dag.side(), sample_angles(first.N, first.seed));
  for (double b : {cfg.beta / 10.0, cfg.beta, cfg.beta * 10.0})
    rep.beta_check.push_back(approx_sc_value(r_dag, op, q, b, cfg.solver));
  return rep;
}

void write_approx_sc_csv(const std::filesystem::path& path, const ApproxScReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_approx_sc_csv: cannot open " + path.string());
  out << "N,k,seed,value\n";
  char buf[128];
  for (const auto& c : report.cells) {
    std::snprintf(buf, sizeof buf, "%d,%d,%llu,%.17g\n", c.N, c.k, static_cast<unsigned long long>(c.seed), c.value);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "summary,beta=%.17g,fitted=%.17g,target=%.17g\n", report.beta,
                report.fitted_exponent, report.target_exponent);
  out << buf;
}

}  // namespace spartomo
