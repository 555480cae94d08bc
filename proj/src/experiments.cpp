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

#include "spartomo/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "spartomo/parallel.hpp"
#include "spartomo/radon.hpp"

namespace spartomo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Seed offsets keep tuning pilots and comparison batches away from the
// measured (N, k) cells.
constexpr int kPilotBase = 1 << 20;
constexpr int kBatchBase = 1 << 24;

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out;
  if (count == 1) return {std::sqrt(lo * hi)};
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
  return out;
}

int median_n(const ExperimentConfig& cfg) {
  const auto grid = n_grid(cfg.N_min, cfg.N_max, cfg.N_points);
  return grid[grid.size() / 2];
}

double theoretical_rate(NoiseRegime regime) { return regime == NoiseRegime::fixed_noise ? -1.0 / 3.0 : -1.0; }

// Mean metric per candidate over the pilot cells; returns the argmin. With
// extend_edges, an argmin on the boundary grows the grid one step outward
// (same log spacing) until the minimum is interior or kMaxEdgeSteps is reached.
constexpr int kMaxEdgeSteps = 6;

TuningResult grid_search(const ExperimentConfig& cfg, const Image& f_dag, double peak, bool use_bregman,
                         bool extend_edges = false) {
  const int N = median_n(cfg);
  const std::size_t np = std::size_t(cfg.pilots);
  auto evaluate = [&](const std::vector<double>& cands) {
    std::vector<double> vals(cands.size() * np), means;
    parallel_for(vals.size(), cfg.jobs, [&](std::size_t idx) {
      const DecayRecord r = run_cell(cfg, f_dag, peak, cands[idx / np], N, kPilotBase + int(idx % np));
      vals[idx] = use_bregman ? r.bregman : r.rel_err_sq;
    });
    for (std::size_t c = 0; c < cands.size(); ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < np; ++j) s += vals[c * np + j];
      means.push_back(s / double(np));
    }
    return means;
  };
  TuningResult t;
  t.candidates = log_grid(cfg.c_alpha_lo, cfg.c_alpha_hi, cfg.c_alpha_count);
  t.mean_metric = evaluate(t.candidates);
  const double ratio = t.candidates.size() > 1 ? t.candidates[1] / t.candidates[0] : std::sqrt(10.0);
  auto argmin = [&] {
    std::size_t best = t.candidates.size();
    for (std::size_t c = 0; c < t.candidates.size(); ++c)
      // NaN (failed pilot) never wins.
      if (t.mean_metric[c] < (best == t.candidates.size() ? std::numeric_limits<double>::infinity()
                                                            : t.mean_metric[best]))
        best = c;
    return best;
  };
  std::size_t best = argmin();
  for (int step = 0; extend_edges && step < kMaxEdgeSteps && best < t.candidates.size(); ++step) {
    if (best == 0) {
      const double c = t.candidates.front() / ratio;
      t.candidates.insert(t.candidates.begin(), c);
      t.mean_metric.insert(t.mean_metric.begin(), evaluate({c})[0]);
    } else if (best + 1 == t.candidates.size() && t.candidates.size() > 1) {
      const double c = t.candidates.back() * ratio;
      t.candidates.push_back(c);
      t.mean_metric.push_back(evaluate({c})[0]);
    } else {
      break;
    }
    best = argmin();
  }
  if (best == t.candidates.size()) throw NumericalError("tune_c_alpha: every candidate failed");
  t.c_alpha = t.candidates[best];
  return t;
}

}  // namespace

NoiseRegime parse_noise_regime(std::string_view name) {
  if (name == "fixed_noise" || name == "fixed") return NoiseRegime::fixed_noise;
  if (name == "decreasing_noise" || name == "decreasing") return NoiseRegime::decreasing_noise;
  throw std::invalid_argument("unknown noise regime '" + std::string(name) + "'");
}

std::string_view to_string(NoiseRegime regime) {
  return regime == NoiseRegime::fixed_noise ? "fixed_noise" : "decreasing_noise";
}

SolverConfig ExperimentConfig::default_experiment_solver() {
  SolverConfig s;
  s.tol_rel_obj = 1e-6;
  return s;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("ExperimentConfig: " + msg); };
  if (N_min < 1 || N_max < N_min) fail("need 1 <= N_min <= N_max");
  if (N_points < 1) fail("N_points must be >= 1");
  if (K < 1) fail("K must be >= 1");
  if (c_alpha && !(*c_alpha > 0.0)) fail("c_alpha must be > 0");
  if (c_delta_rel && !(*c_delta_rel >= 0.0)) fail("c_delta_rel must be >= 0");
  if (n_ref < 1) fail("n_ref must be >= 1");
  if (!(c_alpha_lo > 0.0 && c_alpha_lo <= c_alpha_hi)) fail("need 0 < c_alpha_lo <= c_alpha_hi");
  if (c_alpha_count < 1 || pilots < 1) fail("c_alpha_count and pilots must be >= 1");
  RegularizerSpec r = reg;
  r.alpha = 1.0;
  r.validate();
  solver.validate();
}

std::vector<int> n_grid(int N_min, int N_max, int points) {
  if (N_min < 1 || N_max < N_min || points < 1) throw std::invalid_argument("n_grid: invalid range");
  std::vector<int> out;
  if (points == 1 || N_min == N_max) return {N_min};
  for (int i = 0; i < points; ++i) {
    const int N = int(std::lround(N_min * std::pow(double(N_max) / N_min, double(i) / (points - 1))));
    if (out.empty() || N > out.back()) out.push_back(N);
  }
  return out;
}

double alpha_for(NoiseRegime regime, double c_alpha, int N) {
  return regime == NoiseRegime::fixed_noise ? c_alpha * std::pow(double(N), -1.0 / 3.0) : c_alpha / N;
}

double delta_for(const ExperimentConfig& cfg, double peak, int N) {
  if (cfg.regime == NoiseRegime::fixed_noise) return cfg.c_delta_rel.value_or(0.01) * peak;
  return cfg.c_delta_rel.value_or(0.02 * cfg.N_min) * peak / N;
}

double refined_peak(const Image& f, int n_ref) {
  const RadonOperator op = refined_operator(f.side(), default_detector_count(f.side()), n_ref);
  const Sinogram s = op.forward(f);
  return norm_inf(s.values());
}

DecayRecord run_cell(const ExperimentConfig& cfg, const Image& f_dag, double peak, double c_alpha, int N, int k,
                     Image* reconstruction) {
  DecayRecord rec;
  rec.regime = cfg.regime;
  rec.p = cfg.reg.p;
  rec.transform = cfg.reg.transform.kind;
  rec.N = N;
  rec.k = k;
  rec.seed = derive_seed(cfg.master_seed, std::uint64_t(N), std::uint64_t(k));
  rec.alpha = alpha_for(cfg.regime, c_alpha, N);
  rec.delta = delta_for(cfg, peak, N);
  try {
    auto op = std::make_shared<RadonOperator>(f_dag.side(), sample_angles(N, derive_seed(rec.seed, 1)));
    Sinogram g = add_noise(op->forward(f_dag), rec.delta, derive_seed(rec.seed, 2));
    RegularizerSpec spec = cfg.reg;
    spec.alpha = rec.alpha;
    CompositeProblem prob{op, std::move(g), Regularizer(spec, f_dag.side())};
    SolverResult sol = vmila_minimize(prob, cfg.solver, Image(f_dag.side()));
    Image x(f_dag.side(), std::move(sol.x));
    if (spec.nonneg)
      for (double& e : x.values()) e = std::max(e, 0.0);
    rec.objective_final = sol.objective;
    rec.bregman = prob.reg.bregman_distance(x, f_dag);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x.values()[i] - f_dag.values()[i];
      num += d * d;
      den += f_dag.values()[i] * f_dag.values()[i];
    }
    rec.rel_err_sq = num / den;
    if (reconstruction) *reconstruction = std::move(x);
  } catch (const NumericalError& e) {
    rec.status = std::string("failed: ") + e.what();
    rec.bregman = rec.rel_err_sq = rec.objective_final = kNaN;
  }
  return rec;
}

TuningResult tune_c_alpha(const ExperimentConfig& cfg, const Image& f_dag, double peak) {
  return grid_search(cfg, f_dag, peak, cfg.reg.p > 1.0);
}

std::vector<CurvePoint> aggregate(const std::vector<DecayRecord>& records, bool use_bregman) {
  std::map<int, std::vector<double>> by_n;
  for (const auto& r : records)
    if (r.status == "ok") by_n[r.N].push_back(use_bregman ? r.bregman : r.rel_err_sq);
  std::vector<CurvePoint> out;
  for (auto& [N, v] : by_n) {
    // Records arrive in grid order, so the sums are reproducible.
    double s = 0.0;
    for (double e : v) s += e;
    const double mean = s / double(v.size());
    double ss = 0.0;
    for (double e : v) ss += (e - mean) * (e - mean);
    out.push_back({N, mean, v.size() > 1 ? std::sqrt(ss / double(v.size() - 1)) : 0.0, int(v.size())});
  }
  return out;
}

DecayResult run_decay_experiment(const ExperimentConfig& cfg, const Image& f_dag) {
  cfg.validate();
  if (f_dag.min() < kNonnegTolerance) throw std::invalid_argument("run_decay_experiment: f_dag must be nonnegative");
  const double peak = refined_peak(f_dag, cfg.n_ref);
  DecayResult res;
  res.theoretical_exponent = theoretical_rate(cfg.regime);
  if (cfg.c_alpha) {
    res.c_alpha = *cfg.c_alpha;
  } else {
    res.tuning = tune_c_alpha(cfg, f_dag, peak);
    res.c_alpha = res.tuning->c_alpha;
  }
  const auto grid = n_grid(cfg.N_min, cfg.N_max, cfg.N_points);
  const std::size_t K = std::size_t(cfg.K);
  res.records.resize(grid.size() * K);
  parallel_for(res.records.size(), cfg.jobs, [&](std::size_t idx) {
    res.records[idx] = run_cell(cfg, f_dag, peak, res.c_alpha, grid[idx / K], int(idx % K));
  });
  res.bregman_curve = aggregate(res.records, true);
  res.error_curve = aggregate(res.records, false);
  if (res.bregman_curve.size() >= 2) {
    Vector Ns, means;
    for (const auto& c : res.bregman_curve) {
      Ns.push_back(c.N);
      means.push_back(c.mean);
    }
    res.fit = fit_monomial(Ns, means);
  }
  return res;
}

void write_decay_csv(const std::filesystem::path& path, const std::vector<DecayRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_decay_csv: cannot open " + path.string());
  out << "regime,p,transform,N,k,seed,alpha,delta,bregman,rel_err_sq,objective_final,status\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%d,%d,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,", to_string(r.regime).data(),
                  r.p, to_string(r.transform).data(), r.N, r.k, static_cast<unsigned long long>(r.seed), r.alpha,
                  r.delta, r.bregman, r.rel_err_sq, r.objective_final);
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << buf << status << '\n';
  }
}

GammaResult gamma_convergence_study(const ExperimentConfig& base, const Image& f_dag, int N, double alpha,
                                    const std::vector<double>& p_list) {
  base.validate();
  if (!(alpha > 0.0)) throw std::invalid_argument("gamma_convergence_study: alpha must be > 0");
  for (double p : p_list)
    if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("gamma_convergence_study: p_list must lie in (1, 2]");
  const double peak = refined_peak(f_dag, base.n_ref);
  const std::uint64_t seed = derive_seed(base.master_seed, std::uint64_t(N), 0);
  auto op = std::make_shared<RadonOperator>(f_dag.side(), sample_angles(N, derive_seed(seed, 1)));
  const Sinogram g = add_noise(op->forward(f_dag), delta_for(base, peak, N), derive_seed(seed, 2));
  auto transform = make_transform(base.reg.transform, f_dag.side());

  std::vector<double> ps = p_list;
  ps.push_back(1.0);
  std::vector<Vector> sols(ps.size());
  parallel_for(ps.size(), base.jobs, [&](std::size_t i) {
    RegularizerSpec spec = base.reg;
    spec.p = ps[i];
    spec.alpha = alpha;
    CompositeProblem prob{op, g, Regularizer(spec, transform)};
    sols[i] = vmila_minimize(prob, base.solver, Image(f_dag.side())).x;
  });
  GammaResult out;
  const Vector& ref = sols.back();
  const double nref = norm2(ref);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Vector d(ref.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = sols[i][j] - ref[j];
    out.rows.push_back({ps[i], norm2(d) / nref});
  }
  out.reference = Image(f_dag.side(), ref);
  return out;
}

std::vector<Strategy> default_strategies() {
  return {
      {"tikhonov-p2", 2.0, TransformKind::identity, {}},
      {"wavelet-p1.5", 1.5, TransformKind::wavelet, {}},
      {"wavelet-p1.33", 4.0 / 3.0, TransformKind::wavelet, {}},
      {"shearlet-p1.5", 1.5, TransformKind::shearlet, {}},
      {"shearlet-p1.33", 4.0 / 3.0, TransformKind::shearlet, {}},
      {"shearlet-p1", 1.0, TransformKind::shearlet, {}},
  };
}

ComparisonResult compare_regularizers(const ExperimentConfig& base, const Image& f_dag,
                                      const std::vector<Strategy>& strategies, const CompareOptions& opts) {
  base.validate();
  if (opts.batches < 0 || opts.batch_size < 1) throw std::invalid_argument("compare_regularizers: invalid batches");
  const double peak = refined_peak(f_dag, base.n_ref);
  ComparisonResult res;
  res.batches = opts.batches;
  const auto grid = n_grid(base.N_min, base.N_max, base.N_points);
  for (const Strategy& st : strategies) {
    ExperimentConfig cfg = base;
    cfg.reg.p = st.p;
    cfg.reg.transform.kind = st.transform;
    StrategyCurve curve;
    curve.strategy = st;
    curve.c_alpha = st.c_alpha ? *st.c_alpha : grid_search(cfg, f_dag, peak, false, true).c_alpha;

    if (opts.curves) {
      const std::size_t K = std::size_t(cfg.K);
      std::vector<DecayRecord> recs(grid.size() * K);
      parallel_for(recs.size(), cfg.jobs, [&](std::size_t idx) {
        recs[idx] = run_cell(cfg, f_dag, peak, curve.c_alpha, grid[idx / K], int(idx % K));
      });
      curve.error_curve = aggregate(recs, false);
      res.records.insert(res.records.end(), recs.begin(), recs.end());
    }
    const std::size_t nb = std::size_t(opts.batches), bs = std::size_t(opts.batch_size);
    std::vector<DecayRecord> brec(nb * bs);
    parallel_for(brec.size(), cfg.jobs, [&](std::size_t idx) {
      const int k = kBatchBase + int(idx / bs) * (1 << 10) + int(idx % bs);
      brec[idx] = run_cell(cfg, f_dag, peak, curve.c_alpha, base.N_max, k);
    });
    for (std::size_t b = 0; b < nb; ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < bs; ++j) s += brec[b * bs + j].rel_err_sq;
      curve.batch_errors.push_back(s / double(bs));
    }
    res.curves.push_back(std::move(curve));
  }
  return res;
}

}  // namespace spartomo
