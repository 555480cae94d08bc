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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "spartomo/experiments.hpp"
#include "spartomo/phantoms.hpp"

using namespace spartomo;

namespace {

ExperimentConfig small_config(double p, TransformKind kind) {
  ExperimentConfig cfg;
  cfg.N_min = 8;
  cfg.N_max = 16;
  cfg.N_points = 3;
  cfg.K = 2;
  cfg.n_ref = 40;
  cfg.c_alpha = 1e-3;
  cfg.reg.p = p;
  cfg.reg.nonneg = true;
  cfg.reg.transform.kind = kind;
  cfg.solver.max_outer = 100;
  return cfg;
}

Image downsample(const Image& f, int factor) {
  const int side = f.side() / factor;
  Image out(side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      double s = 0.0;
      for (int i = 0; i < factor; ++i)
        for (int j = 0; j < factor; ++j) s += f(r * factor + i, c * factor + j);
      out(r, c) = s / (factor * factor);
    }
  return out;
}

}  // namespace

TEST(RateFit, ExactLines) {
  RateFit a = fit_monomial(Vector{1, 10}, Vector{2, 0.2});
  EXPECT_NEAR(a.beta_exp, -1.0, 1e-12);
  EXPECT_NEAR(a.c, 2.0, 1e-12);
  RateFit b = fit_monomial(Vector{1, 100}, Vector{5, 5});
  EXPECT_NEAR(b.beta_exp, 0.0, 1e-12);
  EXPECT_NEAR(b.c, 5.0, 1e-12);
}

TEST(RateFit, NoisySyntheticPowerLaw) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 0.01);
  Vector N, v;
  for (int i = 0; i < 8; ++i) {
    const double n = 16.0 * std::pow(2.0, i / 2.0);
    N.push_back(n);
    v.push_back(3.0 * std::pow(n, -1.0 / 3.0) * (1.0 + g(rng)));
  }
  RateFit f = fit_monomial(N, v);
  EXPECT_NEAR(f.beta_exp, -1.0 / 3.0, 0.02);
  EXPECT_GT(f.r_squared, 0.9);
}

TEST(RateFit, Rejections) {
  EXPECT_THROW(fit_monomial(Vector{1}, Vector{1}), std::invalid_argument);
  EXPECT_THROW(fit_monomial(Vector{1, 2}, Vector{1, 0}), std::invalid_argument);
  EXPECT_THROW(fit_monomial(Vector{1, 2}, Vector{1, -1}), std::invalid_argument);
  EXPECT_THROW(fit_monomial(Vector{3, 3}, Vector{1, 2}), std::invalid_argument);
  EXPECT_THROW(fit_monomial(Vector{1, 2, 3}, Vector{1, 2}), std::invalid_argument);
}

TEST(Schedules, Grid) {
  EXPECT_EQ(n_grid(16, 64, 6), (std::vector<int>{16, 21, 28, 37, 49, 64}));
  EXPECT_EQ(n_grid(36, 162, 1), (std::vector<int>{36}));
  const auto g = n_grid(2, 4, 8);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_EQ(std::adjacent_find(g.begin(), g.end()), g.end());
  EXPECT_EQ(g.front(), 2);
  EXPECT_EQ(g.back(), 4);
  EXPECT_THROW(n_grid(10, 5, 3), std::invalid_argument);
}

TEST(Schedules, AlphaAndDelta) {
  EXPECT_DOUBLE_EQ(alpha_for(NoiseRegime::fixed_noise, 2.0, 8), 1.0);
  EXPECT_DOUBLE_EQ(alpha_for(NoiseRegime::decreasing_noise, 2.0, 8), 0.25);
  ExperimentConfig cfg;
  cfg.N_min = 36;
  cfg.N_max = 162;
  EXPECT_DOUBLE_EQ(delta_for(cfg, 5.0, 36), 0.05);
  EXPECT_EQ(delta_for(cfg, 5.0, 36), delta_for(cfg, 5.0, 162));
  cfg.regime = NoiseRegime::decreasing_noise;
  EXPECT_DOUBLE_EQ(delta_for(cfg, 5.0, 36), 0.1);
  EXPECT_EQ(delta_for(cfg, 5.0, 162) / delta_for(cfg, 5.0, 36), 36.0 / 162.0);
}

TEST(Schedules, RegimeNames) {
  EXPECT_EQ(parse_noise_regime("fixed_noise"), NoiseRegime::fixed_noise);
  EXPECT_EQ(parse_noise_regime("decreasing"), NoiseRegime::decreasing_noise);
  EXPECT_EQ(to_string(NoiseRegime::decreasing_noise), "decreasing_noise");
  EXPECT_THROW(parse_noise_regime("loud"), std::invalid_argument);
}

TEST(Experiment, ConfigValidation) {
  ExperimentConfig cfg = small_config(1.5, TransformKind::wavelet);
  EXPECT_NO_THROW(cfg.validate());
  cfg.K = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config(1.5, TransformKind::wavelet);
  cfg.N_max = 4;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config(0.5, TransformKind::wavelet);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Experiment, CellReproducesBitExactly) {
  const Image f = generate_phantom(PhantomKind::plant_like, 32, 1);
  ExperimentConfig cfg = small_config(1.5, TransformKind::wavelet);
  const double peak = refined_peak(f, cfg.n_ref);
  Image ra, rb;
  DecayRecord a = run_cell(cfg, f, peak, 1e-3, 12, 1, &ra);
  DecayRecord b = run_cell(cfg, f, peak, 1e-3, 12, 1, &rb);
  EXPECT_EQ(a.status, "ok");
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.bregman, b.bregman);
  EXPECT_EQ(a.rel_err_sq, b.rel_err_sq);
  EXPECT_EQ(ra.values(), rb.values());
  EXPECT_GE(a.bregman, 0.0);
  EXPECT_GE(a.rel_err_sq, 0.0);
  EXPECT_GE(ra.min(), 0.0);
  DecayRecord other = run_cell(cfg, f, peak, 1e-3, 12, 2);
  EXPECT_NE(other.seed, a.seed);
  EXPECT_NE(other.rel_err_sq, a.rel_err_sq);
}

TEST(Experiment, P1CellUsesSignSelection) {
  const Image f = generate_phantom(PhantomKind::plant_like, 32, 1);
  ExperimentConfig cfg = small_config(1.0, TransformKind::shearlet);
  DecayRecord r = run_cell(cfg, f, refined_peak(f, cfg.n_ref), 1e-3, 12, 0);
  EXPECT_EQ(r.status, "ok");
  EXPECT_GE(r.bregman, 0.0);
  EXPECT_TRUE(std::isfinite(r.bregman));
}

TEST(Experiment, AggregateMatchesRecordMeans) {
  const Image f = generate_phantom(PhantomKind::plant_like, 32, 2);
  ExperimentConfig cfg = small_config(1.5, TransformKind::wavelet);
  DecayResult res = run_decay_experiment(cfg, f);
  ASSERT_EQ(res.records.size(), 3u * 2u);
  ASSERT_EQ(res.bregman_curve.size(), 3u);
  EXPECT_FALSE(res.tuning.has_value());
  EXPECT_DOUBLE_EQ(res.c_alpha, 1e-3);
  for (const CurvePoint& pt : res.error_curve) {
    double s = 0.0;
    int n = 0;
    for (const auto& r : res.records)
      if (r.N == pt.N) s += r.rel_err_sq, ++n;
    EXPECT_EQ(pt.count, n);
    EXPECT_NEAR(pt.mean, s / n, 1e-15 * pt.mean);
  }
  EXPECT_TRUE(std::isfinite(res.fit.beta_exp));

  const auto path = std::filesystem::temp_directory_path() / "spartomo_decay_test.csv";
  write_decay_csv(path, res.records);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "regime,p,transform,N,k,seed,alpha,delta,bregman,rel_err_sq,objective_final,status");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
  std::filesystem::remove(path);
}

TEST(Experiment, TuningPicksGridValue) {
  const Image f = generate_phantom(PhantomKind::plant_like, 32, 2);
  ExperimentConfig cfg = small_config(1.5, TransformKind::wavelet);
  cfg.c_alpha.reset();
  cfg.c_alpha_count = 3;
  cfg.pilots = 1;
  TuningResult t = tune_c_alpha(cfg, f, refined_peak(f, cfg.n_ref));
  ASSERT_EQ(t.candidates.size(), 3u);
  EXPECT_DOUBLE_EQ(t.candidates.front(), cfg.c_alpha_lo);
  EXPECT_NEAR(t.candidates.back(), cfg.c_alpha_hi, 1e-15);
  const auto best = std::min_element(t.mean_metric.begin(), t.mean_metric.end()) - t.mean_metric.begin();
  EXPECT_EQ(t.c_alpha, t.candidates[std::size_t(best)]);
}

TEST(Experiment, ExactDataBregmanShrinksWithAlpha) {
  const Image f = downsample(generate_phantom(PhantomKind::plant_like, 32, 3), 4);
  ExperimentConfig cfg;
  cfg.N_min = cfg.N_max = 24;
  cfg.c_delta_rel = 0.0;
  cfg.reg.p = 1.5;
  cfg.reg.nonneg = true;
  cfg.n_ref = 40;
  cfg.solver.tol_rel_obj = 1e-12;
  cfg.solver.max_outer = 5000;
  const double peak = refined_peak(f, cfg.n_ref);
  double prev = std::numeric_limits<double>::infinity();
  for (double c : {1e-1, 1e-2, 1e-3, 1e-4}) {
    DecayRecord r = run_cell(cfg, f, peak, c, 24, 0);
    ASSERT_EQ(r.status, "ok");
    EXPECT_EQ(r.delta, 0.0);
    EXPECT_LT(r.bregman, prev) << "c_alpha " << c;
    prev = r.bregman;
  }
}

TEST(Gamma, ScalarPowerTrend) {
  double prev = 0.0;
  for (double p : {1.5, 1.25, 1.1, 1.01, 1.001}) {
    const double v = std::pow(0.5, p) / p;
    EXPECT_GT(v, prev);
    EXPECT_LT(v, 0.5);
    prev = v;
  }
  EXPECT_NEAR(prev, 0.5, 1e-3);
}

TEST(Gamma, DistanceShrinksTowardsP1) {
  const Image f = generate_phantom(PhantomKind::plant_like, 16, 4);
  ExperimentConfig cfg = small_config(1.5, TransformKind::wavelet);
  cfg.solver.tol_rel_obj = 1e-10;
  cfg.solver.max_outer = 2000;
  GammaResult g = gamma_convergence_study(cfg, f, 12, 1e-3, {1.5, 1.1});
  ASSERT_EQ(g.rows.size(), 3u);
  EXPECT_EQ(g.rows.back().p, 1.0);
  EXPECT_EQ(g.rows.back().rel_distance, 0.0);
  EXPECT_LT(g.rows[1].rel_distance, g.rows[0].rel_distance);
  EXPECT_THROW(gamma_convergence_study(cfg, f, 12, 1e-3, {1.0}), std::invalid_argument);
}

TEST(Compare, DeterministicAndShared) {
  const Image f = generate_phantom(PhantomKind::plant_like, 32, 5);
  ExperimentConfig cfg = small_config(1.5, TransformKind::wavelet);
  std::vector<Strategy> strategies{{"tik", 2.0, TransformKind::identity, 1e-2},
                                   {"wav", 1.5, TransformKind::wavelet, 1e-3}};
  CompareOptions opts;
  opts.batches = 2;
  opts.batch_size = 1;
  ComparisonResult a = compare_regularizers(cfg, f, strategies, opts);
  ComparisonResult b = compare_regularizers(cfg, f, strategies, opts);
  ASSERT_EQ(a.curves.size(), 2u);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(a.curves[s].batch_errors, b.curves[s].batch_errors);
    EXPECT_EQ(a.curves[s].batch_errors.size(), 2u);
    EXPECT_EQ(a.curves[s].error_curve.size(), 3u);
  }
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].rel_err_sq, b.records[i].rel_err_sq);
  // Both strategies see the same seeds for the same cell.
  std::map<std::pair<int, int>, std::set<std::uint64_t>> seeds;
  for (const auto& r : a.records) seeds[{r.N, r.k}].insert(r.seed);
  for (const auto& [key, s] : seeds) EXPECT_EQ(s.size(), 1u);
}

TEST(Compare, TuningLeavesTheGridWhenTheOptimumIsOnTheEdge) {
  // A grid of two strong weights: the relative-error optimum for Tikhonov on
  // well-sampled data lies below it, so the search must step down.
  const Image f = generate_phantom(PhantomKind::plant_like, 16, 5);
  ExperimentConfig cfg = small_config(2.0, TransformKind::identity);
  cfg.c_alpha_lo = 1.0;
  cfg.c_alpha_hi = 10.0;
  cfg.c_alpha_count = 2;
  cfg.pilots = 1;
  CompareOptions opts;
  opts.batches = 1;
  opts.batch_size = 1;
  opts.curves = false;
  const ComparisonResult r = compare_regularizers(cfg, f, {{"tik", 2.0, TransformKind::identity, {}}}, opts);
  ASSERT_EQ(r.curves.size(), 1u);
  EXPECT_LT(r.curves[0].c_alpha, 1.0);
  EXPECT_GE(r.curves[0].c_alpha, 1e-6 * (1.0 - 1e-12));
}

TEST(Experiment, P1TuningAvoidsTheZeroReconstruction) {
  const Image f = generate_phantom(PhantomKind::plant_like, 16, 2);
  ExperimentConfig cfg = small_config(1.0, TransformKind::wavelet);
  cfg.c_alpha.reset();
  cfg.c_alpha_lo = 1e-4;
  cfg.c_alpha_hi = 1e3;
  cfg.c_alpha_count = 8;
  cfg.pilots = 1;
  const double peak = refined_peak(f, cfg.n_ref);
  // A huge weight drives the reconstruction to zero, where the p = 1 Bregman
  // distance vanishes.
  Image rec;
  const DecayRecord zero = run_cell(cfg, f, peak, 1e3, cfg.N_max, 0, &rec);
  EXPECT_EQ(rec.max(), 0.0);
  EXPECT_EQ(zero.bregman, 0.0);
  const TuningResult t = tune_c_alpha(cfg, f, peak);
  EXPECT_LT(t.c_alpha, 1e3);
  EXPECT_LT(*std::min_element(t.mean_metric.begin(), t.mean_metric.end()), 1.0);
}
