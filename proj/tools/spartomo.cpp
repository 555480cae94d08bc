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

// spartomo command-line driver: phantom | sc-build | sc-verify | decay | gamma | compare.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 1 anything else.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spartomo/config.hpp"
#include "spartomo/experiments.hpp"
#include "spartomo/parallel.hpp"
#include "spartomo/phantoms.hpp"
#include "spartomo/plot.hpp"
#include "spartomo/radon.hpp"
#include "spartomo/source_condition.hpp"

#ifndef SPARTOMO_VERSION
#define SPARTOMO_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace spartomo;

namespace {

struct GlobalOptions {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  int jobs = default_jobs();
  bool desk_scale = false;
};

void log(const std::string& msg) { std::fprintf(stderr, "[spartomo] %s\n", msg.c_str()); }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Everything the subcommands read from the config, resolved with defaults.
struct Settings {
  // [phantom]
  PhantomKind phantom_kind = PhantomKind::plant_like;
  int side = 128;
  std::uint64_t phantom_seed = 1;
  std::string phantom_file;
  std::string strong_sc = "auto";
  double sc_alpha_rel = 1e-6;
  std::optional<double> sc_alpha;
  int sc_n_ref = 500;
  // [regularizer]
  std::optional<double> p;
  // [experiment], [solver] and the rest of [regularizer]
  ExperimentConfig exp;
  // [approx_sc]
  double beta = 1e-3;
  std::vector<int> approx_N;
  int approx_K = 0;
  // [gamma]
  std::optional<int> gamma_N;
  std::optional<double> gamma_alpha;
  std::vector<double> gamma_p{1.5, 1.25, 1.1, 1.01};
  // [compare]
  CompareOptions compare;
  std::vector<Strategy> strategies = default_strategies();
};

Settings read_settings(const ConfigFile& cf) {
  Settings s;
  auto wrap = [&](const std::string& section, const std::string& key, auto&& fn) {
    try {
      return fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(cf.source() + ": [" + section + "] " + key + ": " + e.what());
    }
  };
  s.phantom_kind = wrap("phantom", "kind", [&] {
    return parse_phantom_kind(cf.get_string("phantom", "kind", std::string(to_string(s.phantom_kind))));
  });
  s.side = cf.get_int("phantom", "side", s.side);
  s.phantom_seed = cf.get_u64("phantom", "seed", s.phantom_seed);
  s.phantom_file = cf.get_string("phantom", "file", "");
  s.strong_sc = cf.get_string("phantom", "strong_sc", s.strong_sc);
  if (s.strong_sc != "auto" && s.strong_sc != "true" && s.strong_sc != "false")
    throw ConfigError(cf.source() + ": [phantom] strong_sc: expected auto, true or false, got '" + s.strong_sc + "'");
  s.sc_alpha_rel = cf.get_double("phantom", "sc_alpha_rel", s.sc_alpha_rel);
  s.sc_alpha = cf.get_optional_double("phantom", "sc_alpha");
  s.sc_n_ref = cf.get_int("phantom", "sc_n_ref", s.sc_n_ref);

  ExperimentConfig& e = s.exp;
  e.N_min = 36;
  e.N_max = 162;
  e.N_points = 8;
  e.K = 30;
  e.n_ref = 500;
  e.reg.nonneg = true;
  s.p = cf.get_optional_double("regularizer", "p");
  if (s.p) e.reg.p = *s.p;
  e.reg.transform.kind = wrap("regularizer", "transform", [&] {
    return parse_transform_kind(cf.get_string("regularizer", "transform", "wavelet"));
  });
  e.reg.nonneg = cf.get_bool("regularizer", "nonneg", e.reg.nonneg);
  e.reg.transform.levels = cf.get_int("regularizer", "levels", e.reg.transform.levels);
  e.reg.transform.tight = cf.get_bool("regularizer", "tight", e.reg.transform.tight);
  const std::string weights = cf.get_string("regularizer", "weights", "uniform");
  if (weights == "besov")
    e.reg.transform.weight_mode = WeightMode::besov;
  else if (weights != "uniform")
    throw ConfigError(cf.source() + ": [regularizer] weights: expected uniform or besov, got '" + weights + "'");
  e.reg.transform.besov_s = cf.get_double("regularizer", "besov_s", e.reg.transform.besov_s);
  e.reg.transform.besov_p = e.reg.p;

  e.regime = wrap("experiment", "regime", [&] {
    return parse_noise_regime(cf.get_string("experiment", "regime", std::string(to_string(e.regime))));
  });
  e.N_min = cf.get_int("experiment", "N_min", e.N_min);
  e.N_max = cf.get_int("experiment", "N_max", e.N_max);
  e.N_points = cf.get_int("experiment", "N_points", e.N_points);
  e.K = cf.get_int("experiment", "K", e.K);
  e.c_alpha = cf.get_optional_double("experiment", "c_alpha");
  e.c_delta_rel = cf.get_optional_double("experiment", "c_delta_rel");
  e.master_seed = cf.get_u64("experiment", "master_seed", e.master_seed);
  e.n_ref = cf.get_int("experiment", "n_ref", e.n_ref);
  e.c_alpha_lo = cf.get_double("experiment", "c_alpha_lo", e.c_alpha_lo);
  e.c_alpha_hi = cf.get_double("experiment", "c_alpha_hi", e.c_alpha_hi);
  e.c_alpha_count = cf.get_int("experiment", "c_alpha_count", e.c_alpha_count);
  e.pilots = cf.get_int("experiment", "pilots", e.pilots);

  SolverConfig& sv = e.solver;
  sv.eta = cf.get_double("solver", "eta", sv.eta);
  sv.lambda_min = cf.get_double("solver", "lambda_min", sv.lambda_min);
  sv.lambda_max = cf.get_double("solver", "lambda_max", sv.lambda_max);
  sv.lambda0 = cf.get_double("solver", "lambda0", sv.lambda0);
  sv.L_scale = cf.get_double("solver", "L_scale", sv.L_scale);
  sv.max_outer = cf.get_int("solver", "max_outer", sv.max_outer);
  sv.max_inner = cf.get_int("solver", "max_inner", sv.max_inner);
  sv.tol_rel_obj = cf.get_double("solver", "tol_rel_obj", sv.tol_rel_obj);
  sv.inner_retries = cf.get_int("solver", "inner_retries", sv.inner_retries);
  sv.warm_restart = cf.get_bool("solver", "warm_restart", sv.warm_restart);
  sv.scaling = wrap("solver", "scaling", [&] {
    return parse_scaling_mode(cf.get_string("solver", "scaling", std::string(to_string(sv.scaling))));
  });

  s.beta = cf.get_double("approx_sc", "beta", s.beta);
  s.approx_N = cf.get_ints("approx_sc", "N_values", {});
  s.approx_K = cf.get_int("approx_sc", "K", 0);

  if (cf.has("gamma", "N")) s.gamma_N = cf.get_int("gamma", "N");
  s.gamma_alpha = cf.get_optional_double("gamma", "alpha");
  s.gamma_p = cf.get_doubles("gamma", "p_list", s.gamma_p);

  s.compare.batches = cf.get_int("compare", "batches", s.compare.batches);
  s.compare.batch_size = cf.get_int("compare", "batch_size", s.compare.batch_size);
  s.compare.curves = cf.get_bool("compare", "curves", s.compare.curves);
  const std::string labels = cf.get_string("compare", "strategies", "");
  if (!labels.empty()) {
    std::vector<Strategy> chosen;
    std::string rest = labels;
    while (!rest.empty()) {
      const auto c = rest.find(',');
      std::string label = rest.substr(0, c);
      label.erase(0, label.find_first_not_of(' '));
      label.erase(label.find_last_not_of(' ') + 1);
      rest = c == std::string::npos ? "" : rest.substr(c + 1);
      auto it = std::find_if(s.strategies.begin(), s.strategies.end(), [&](const Strategy& st) { return st.label == label; });
      if (it == s.strategies.end()) throw ConfigError(cf.source() + ": [compare] strategies: unknown label '" + label + "'");
      chosen.push_back(*it);
    }
    s.strategies = chosen;
  }
  for (Strategy& st : s.strategies) st.c_alpha = cf.get_optional_double("compare", "c_alpha." + st.label);

  cf.require_all_used();
  if (s.side < 16) throw ConfigError(cf.source() + ": [phantom] side: must be >= 16");
  try {
    RegularizerSpec r = e.reg;
    r.alpha = 1.0;
    r.validate();
    e.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(cf.source() + ": " + ex.what());
  }
  return s;
}

// The shared state of one invocation: config, output directory, manifest.
class Run {
 public:
  Run(std::string command, const GlobalOptions& g, const std::vector<std::string>& argv)
      : command_(std::move(command)), g_(g), argv_(argv), started_(utc_now()) {
    cf_ = g.config.empty() ? ConfigFile::parse("", "<defaults>") : ConfigFile::load(g.config);
    if (g.desk_scale) {
      cf_.set("phantom", "side", "64");
      cf_.set("phantom", "sc_n_ref", "180");
      cf_.set("experiment", "N_min", "16");
      cf_.set("experiment", "N_max", "64");
      cf_.set("experiment", "N_points", "6");
      cf_.set("experiment", "K", "10");
      cf_.set("experiment", "n_ref", "180");
    }
    if (g.seed) cf_.set("experiment", "master_seed", std::to_string(*g.seed));
    settings_ = read_settings(cf_);
    settings_.exp.jobs = g.jobs;
    fs::create_directories(g.out);
  }

  const Settings& settings() const { return settings_; }
  double require_p() const {
    if (!settings_.p) throw ConfigError(cf_.source() + ": missing required field [regularizer] p");
    return *settings_.p;
  }
  fs::path output(const std::string& name) {
    outputs_.push_back(name);
    return fs::path(g_.out) / name;
  }

  Image base_phantom() const {
    const Settings& s = settings_;
    if (s.phantom_file.empty()) return generate_phantom(s.phantom_kind, s.side, s.phantom_seed);
    const fs::path path = s.phantom_file;
    Image img = load_image(path, path.extension() == ".pgm" ? ImageFormat::pgm : ImageFormat::raw_f64);
    if (img.side() != s.side)
      throw ConfigError("[phantom] file: image side " + std::to_string(img.side()) + " does not match side " +
                        std::to_string(s.side));
    return img;
  }

  bool wants_strong_sc(bool automatic) const {
    if (settings_.strong_sc == "true") return true;
    if (settings_.strong_sc == "false") return false;
    const auto& e = settings_.exp;
    return automatic && e.reg.transform.kind == TransformKind::wavelet && e.reg.p > 1.0 && e.reg.p < 2.0;
  }

  StrongScResult strong_sc(const Image& f0) const {
    const Settings& s = settings_;
    StrongScConfig sc;
    sc.p = require_p();
    sc.alpha_sc_rel = s.sc_alpha_rel;
    if (s.sc_alpha) sc.alpha_sc = *s.sc_alpha;
    sc.wavelet = s.exp.reg.transform;
    const RadonOperator refined = refined_operator(f0.side(), default_detector_count(f0.side()), s.sc_n_ref);
    log("building strong source-condition phantom (p = " + num(sc.p) + ", " + std::to_string(s.sc_n_ref) +
        " refined angles)");
    StrongScResult r = build_strong_sc_phantom(f0, refined, sc);
    log("source residual " + num(r.source.residual_rel));
    return r;
  }

  // Ground truth for experiments: strong-SC phantom when requested.
  Image ground_truth(bool automatic) const {
    Image f0 = base_phantom();
    if (!wants_strong_sc(automatic)) return f0;
    return strong_sc(f0).f_dag;
  }

  void write_manifest() {
    const fs::path eff = output("config.effective.cfg");
    write_text_file(eff, cf_.dump());
    nlohmann::json m;
    m["command"] = command_;
    m["argv"] = argv_;
    m["version"] = SPARTOMO_VERSION;
    m["config_source"] = cf_.source();
    m["config"] = cf_.dump();
    m["master_seed"] = settings_.exp.master_seed;
    m["jobs"] = g_.jobs;
    m["desk_scale"] = g_.desk_scale;
    m["started_utc"] = started_;
    m["finished_utc"] = utc_now();
    m["reproduce"] = "spartomo " + command_ + " --config " + eff.string() + " --out " + g_.out;
    outputs_.push_back("manifest.json");
    m["outputs"] = outputs_;
    std::ofstream out(fs::path(g_.out) / "manifest.json");
    out << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  GlobalOptions g_;
  std::vector<std::string> argv_;
  std::string started_;
  ConfigFile cf_;
  Settings settings_;
  std::vector<std::string> outputs_;
};

PlotSeries series_of(const std::string& label, const std::vector<CurvePoint>& curve) {
  PlotSeries s;
  s.label = label;
  for (const auto& c : curve) {
    s.x.push_back(c.N);
    s.mean.push_back(c.mean);
    s.stddev.push_back(c.stddev);
  }
  return s;
}

void cmd_phantom(Run& run) {
  const Image f = run.base_phantom();
  save_pgm(run.output("phantom.pgm"), f);
  save_raw_f64(run.output("phantom.raw"), f.span());
  log("phantom " + std::string(to_string(run.settings().phantom_kind)) + " side " + std::to_string(f.side()));
}

void cmd_sc_build(Run& run) {
  const StrongScResult r = run.strong_sc(run.base_phantom());
  save_pgm(run.output("sc_phantom.pgm"), r.f_dag);
  save_raw_f64(run.output("sc_phantom.raw"), r.f_dag.span());
  save_raw_f64(run.output("sc_source.raw"), r.source.w);
  std::ofstream rep(run.output("sc_report.csv"));
  rep << "p,sc_n_ref,residual_rel,scale\n"
      << num(run.require_p()) << ',' << run.settings().sc_n_ref << ',' << num(r.source.residual_rel) << ','
      << num(r.scale) << '\n';
}

void cmd_sc_verify(Run& run) {
  const Settings& s = run.settings();
  ApproxScConfig cfg;
  cfg.p = run.require_p();
  cfg.beta = s.beta;
  cfg.transform = s.exp.reg.transform;
  cfg.N_values = s.approx_N.empty() ? n_grid(s.exp.N_min, s.exp.N_max, s.exp.N_points) : s.approx_N;
  cfg.K = s.approx_K > 0 ? s.approx_K : s.exp.K;
  cfg.master_seed = s.exp.master_seed;
  cfg.jobs = s.exp.jobs;
  const Image f = run.ground_truth(true);
  const ApproxScReport rep = verify_approx_sc(f, cfg);
  write_approx_sc_csv(run.output("approx_sc.csv"), rep);
  PlotSeries ser;
  ser.label = "approximate source functional";
  for (std::size_t i = 0; i < rep.N_values.size(); ++i) {
    ser.x.push_back(rep.N_values[i]);
    ser.mean.push_back(rep.means[i]);
  }
  PlotOptions po;
  po.title = "approximate source condition, p = " + num(cfg.p);
  po.y_label = "mean value";
  if (rep.N_values.size() >= 2) {
    Vector Ns(rep.N_values.begin(), rep.N_values.end());
    po.fit = fit_monomial(Ns, rep.means);
  }
  po.theory_exponent = rep.target_exponent;
  write_text_file(run.output("approx_sc.svg"), render_loglog_svg({ser}, po));
  log("fitted exponent " + num(rep.fitted_exponent) + ", target " + num(rep.target_exponent));
}

void cmd_decay(Run& run) {
  const Settings& s = run.settings();
  ExperimentConfig cfg = s.exp;
  cfg.reg.p = run.require_p();
  const Image f = run.ground_truth(true);
  log("decay experiment: " + std::string(to_string(cfg.regime)) + ", " +
      std::string(to_string(cfg.reg.transform.kind)) + ", p = " + num(cfg.reg.p));
  const DecayResult res = run_decay_experiment(cfg, f);
  write_decay_csv(run.output("decay.csv"), res.records);
  int failed = 0;
  for (const auto& r : res.records) failed += r.status != "ok";
  if (failed > 0) log(std::to_string(failed) + " cells failed; see the status column");
  if (res.bregman_curve.size() < 2) throw NumericalError("decay: fewer than two N values have successful cells");
  const Vector Ns = [&] {
    Vector v;
    for (const auto& c : res.error_curve) v.push_back(c.N);
    return v;
  }();
  Vector err_means;
  for (const auto& c : res.error_curve) err_means.push_back(c.mean);
  const RateFit err_fit = fit_monomial(Ns, err_means);
  {
    std::ofstream sum(run.output("decay_summary.csv"));
    sum << "curve,c,beta_exp,r_squared,theoretical_exponent,c_alpha\n";
    sum << "bregman," << num(res.fit.c) << ',' << num(res.fit.beta_exp) << ',' << num(res.fit.r_squared) << ','
        << num(res.theoretical_exponent) << ',' << num(res.c_alpha) << '\n';
    sum << "rel_err_sq," << num(err_fit.c) << ',' << num(err_fit.beta_exp) << ',' << num(err_fit.r_squared)
        << ",," << num(res.c_alpha) << '\n';
  }
  if (res.tuning) {
    std::ofstream t(run.output("tuning.csv"));
    t << "c_alpha,mean_metric,metric\n";
    for (std::size_t i = 0; i < res.tuning->candidates.size(); ++i)
      t << num(res.tuning->candidates[i]) << ',' << num(res.tuning->mean_metric[i]) << ','
        << (cfg.reg.p > 1.0 ? "bregman" : "rel_err_sq") << '\n';
  }
  PlotOptions po;
  po.title = std::string(to_string(cfg.regime)) + ", " + std::string(to_string(cfg.reg.transform.kind)) +
             ", p = " + num(cfg.reg.p);
  po.y_label = "mean Bregman distance";
  po.fit = res.fit;
  po.theory_exponent = res.theoretical_exponent;
  write_text_file(run.output("decay.svg"), render_loglog_svg({series_of("Bregman distance", res.bregman_curve)}, po));
  po.y_label = "mean squared relative error";
  po.fit = err_fit;
  po.theory_exponent.reset();
  write_text_file(run.output("decay_error.svg"),
                  render_loglog_svg({series_of("squared relative error", res.error_curve)}, po));
  log("c_alpha " + num(res.c_alpha) + ", fitted exponent " + num(res.fit.beta_exp) + ", theory " +
      num(res.theoretical_exponent));
}

void cmd_gamma(Run& run) {
  const Settings& s = run.settings();
  ExperimentConfig cfg = s.exp;
  const int N = s.gamma_N.value_or(cfg.N_max);
  const double alpha = s.gamma_alpha.value_or(alpha_for(cfg.regime, cfg.c_alpha.value_or(1e-4), N));
  const Image f = run.ground_truth(false);
  const GammaResult g = gamma_convergence_study(cfg, f, N, alpha, s.gamma_p);
  std::ofstream out(run.output("gamma.csv"));
  out << "p,rel_distance\n";
  PlotSeries ser;
  ser.label = "distance to the p = 1 solution";
  for (const auto& r : g.rows) {
    out << num(r.p) << ',' << num(r.rel_distance) << '\n';
    if (r.p > 1.0) {
      ser.x.push_back(r.p - 1.0);
      ser.mean.push_back(r.rel_distance);
    }
  }
  PlotOptions po;
  po.title = "minimizers as p decreases to 1 (N = " + std::to_string(N) + ", alpha = " + num(alpha) + ")";
  po.x_label = "p - 1";
  po.y_label = "relative distance";
  write_text_file(run.output("gamma.svg"), render_loglog_svg({ser}, po));
  save_raw_f64(run.output("gamma_p1.raw"), g.reference.span());
}

void cmd_compare(Run& run) {
  const Settings& s = run.settings();
  const Image f = run.ground_truth(false);
  const ComparisonResult res = compare_regularizers(s.exp, f, s.strategies, s.compare);
  std::ofstream curves(run.output("compare.csv"));
  curves << "label,p,transform,c_alpha,N,mean_rel_err_sq,stddev,count\n";
  std::ofstream batches(run.output("compare_batches.csv"));
  batches << "label,batch,mean_rel_err_sq\n";
  std::vector<PlotSeries> series;
  for (const auto& c : res.curves) {
    for (const auto& pt : c.error_curve)
      curves << c.strategy.label << ',' << num(c.strategy.p) << ',' << to_string(c.strategy.transform) << ','
             << num(c.c_alpha) << ',' << pt.N << ',' << num(pt.mean) << ',' << num(pt.stddev) << ',' << pt.count
             << '\n';
    for (std::size_t b = 0; b < c.batch_errors.size(); ++b)
      batches << c.strategy.label << ',' << b << ',' << num(c.batch_errors[b]) << '\n';
    if (!c.error_curve.empty()) series.push_back(series_of(c.strategy.label, c.error_curve));
  }
  if (!res.records.empty()) write_decay_csv(run.output("compare_records.csv"), res.records);
  PlotOptions po;
  po.title = "regularization strategies, " + std::string(to_string(s.exp.regime));
  po.y_label = "mean squared relative error";
  write_text_file(run.output("compare.svg"), render_loglog_svg(series, po));
  for (const auto& c : res.curves) {
    double m = 0.0;
    for (double e : c.batch_errors) m += e;
    if (!c.batch_errors.empty())
      log(c.strategy.label + ": mean error at N_max " + num(m / double(c.batch_errors.size())));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparsity-promoting tomographic reconstruction experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "master seed override");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--desk-scale", g.desk_scale, "side 64, N 16..64 (6 points), K 10, 180 refined angles");

  using Handler = void (*)(Run&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"phantom", "generate a phantom", cmd_phantom},
      {"sc-build", "build a phantom satisfying the strong source condition", cmd_sc_build},
      {"sc-verify", "check the decay of the approximate source condition", cmd_sc_verify},
      {"decay", "run a Bregman-distance decay experiment", cmd_decay},
      {"gamma", "compare minimizers as p decreases to 1", cmd_gamma},
      {"compare", "compare regularization strategies", cmd_compare},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  const std::vector<std::string> args(argv, argv + argc);
  try {
    for (const auto& [name, help, fn] : commands) {
      if (!app.got_subcommand(name)) continue;
      Run run(name, g, args);
      fn(run);
      run.write_manifest();
      log("wrote outputs to " + g.out);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
