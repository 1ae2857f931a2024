#include "lazyoco/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "lazyoco/coupling.hpp"
#include "lazyoco/harness.hpp"

namespace lazyoco {

namespace {

std::string human(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct RunOptions {
  std::string alg = "ftprll-convex";
  std::string adversary = "iid-rademacher";
  std::size_t T = 1024;
  std::size_t S = 16;
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  double G = 1.0;
  double D = 2.0;
  std::size_t d = 1;
  double lambda = 0.0;
  double sigma = 0.0;  // 0 means "use the tuned value"
  double eta = 0.0;
  double p = 0.5;
  std::size_t C = 1;
  std::string losses;
  bool adaptive = false;
  std::string out;
  std::string trace_dump;
};

RunConfig build_config(const RunOptions& o) {
  RunConfig cfg;
  cfg.alg.name = o.alg;
  cfg.alg.S = o.S;
  cfg.alg.G = o.G;
  cfg.alg.D = o.D;
  cfg.alg.lambda = o.lambda;
  if (o.sigma > 0.0) cfg.alg.sigma = o.sigma;
  if (o.eta > 0.0) cfg.alg.eta = o.eta;
  cfg.adv.name = o.adversary;
  cfg.adv.p = o.p;
  cfg.adv.S = o.S;
  cfg.adv.C = o.C;
  cfg.adv.lambda = o.lambda > 0.0 ? o.lambda : 1.0;
  cfg.adv.losses_path = o.losses;
  cfg.T = o.T;
  cfg.adaptive_model = o.adaptive || o.adversary == "adaptive-pusher";
  const double half = o.D / (2.0 * std::sqrt(static_cast<double>(o.d)));
  cfg.domain = Domain::box(Vec(o.d, -half), Vec(o.d, half));
  return cfg;
}

void dump_trace(const GameTrace& trace, const std::string& path) {
  nlohmann::json j;
  j["seed"] = trace.seed;
  j["regret"] = trace.regret;
  j["switches"] = trace.switches;
  j["loss_values"] = trace.loss_values;
  j["decisions"] = trace.decisions;
  j["switch_flags"] = std::vector<int>(trace.switch_flags.begin(), trace.switch_flags.end());
  if (trace.has_pseudo_regret) j["pseudo_regret_estimate"] = trace.pseudo_regret;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

int cmd_run(const RunOptions& o) {
  const RunConfig cfg = build_config(o);
  const TuningPlan plan = plan_for(cfg);
  std::cout << "algorithm=" << cfg.alg.name << " adversary=" << cfg.adv.name
            << " T=" << cfg.T << " S=" << cfg.alg.S << "\n";
  std::cout << "tuned: sigma=" << human(plan.sigma) << " eta=" << human(plan.eta)
            << (plan.step_rule.empty() ? "" : " step=" + plan.step_rule)
            << " (overrides: sigma=" << (cfg.alg.sigma ? human(*cfg.alg.sigma) : "none")
            << " eta=" << (cfg.alg.eta ? human(*cfg.alg.eta) : "none") << ")\n";

  double regret_sum = 0.0, switch_sum = 0.0, pseudo_sum = 0.0;
  bool has_pseudo = false;
  for (std::size_t j = 0; j < o.seeds; ++j) {
    const std::uint64_t seed = o.seeds == 1 ? o.seed : mix64(o.seed, 0, j);
    GameTrace trace = run_game(cfg, seed);
    regret_sum += trace.regret;
    switch_sum += static_cast<double>(trace.switches);
    if (trace.has_pseudo_regret) {
      has_pseudo = true;
      pseudo_sum += trace.pseudo_regret;
    }
    if (!o.trace_dump.empty() && j == 0) dump_trace(trace, o.trace_dump);
  }
  const double n = static_cast<double>(o.seeds);
  std::cout << "T=" << cfg.T << " regret=" << human(regret_sum / n)
            << " switches=" << human(switch_sum / n);
  if (has_pseudo) std::cout << " pseudo_regret_estimate=" << human(pseudo_sum / n);
  std::cout << "\n";

  if (!o.out.empty()) {
    SweepResult res = sweep({cfg}, o.seeds, o.seed, 1);
    std::ofstream out(o.out);
    if (!out) throw std::runtime_error("cannot open " + o.out);
    out << sweep_to_csv(res);
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              std::size_t jobs, bool json_mirror) {
  SweepSpec spec = load_sweep_spec(config_path);
  if (!out_override.empty()) spec.out = out_override;
  SweepResult res = sweep(spec.cells, spec.seeds, spec.base_seed, jobs);
  const std::string csv = sweep_to_csv(res);
  if (spec.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(spec.out);
    if (!out) throw std::runtime_error("cannot open " + spec.out);
    out << csv;
    if (json_mirror) {
      std::ofstream jout(spec.out + ".json");
      if (!jout) throw std::runtime_error("cannot open " + spec.out + ".json");
      jout << sweep_to_json(res);
    }
    std::cout << "wrote " << res.rows.size() << " rows to " << spec.out << "\n";
  }
  for (const auto& e : res.errors) std::cerr << "error: " << e << "\n";
  return res.errors.empty() ? 0 : 2;
}

int cmd_tune(const std::string& alg, std::size_t T, std::size_t S, double G, double D,
             double lambda, std::size_t d, double sigma, double eta) {
  const TuningPlan plan =
      tune(alg, T, S, G, D, lambda, d,
           sigma > 0.0 ? std::optional<double>(sigma) : std::nullopt,
           eta > 0.0 ? std::optional<double>(eta) : std::nullopt);
  std::cout << "algorithm=" << plan.algorithm << "\n";
  if (plan.sigma > 0.0) {
    std::cout << "sigma=" << human(plan.sigma)
              << (plan.sqrt_schedule ? " (schedule sigma_t = sqrt(t) sigma)" : "") << "\n";
  }
  if (plan.eta > 0.0) std::cout << "eta=" << human(plan.eta) << "\n";
  if (!plan.step_rule.empty()) std::cout << "step_rule=" << plan.step_rule << "\n";
  std::cout << "bound_regret=" << human(plan.bound_regret) << "\n";
  std::cout << "bound_switches=" << human(plan.bound_switches) << "\n";
  return 0;
}

int cmd_convert(double alpha, double gamma, double T, double S, double c) {
  if (alpha > 0.0 && gamma > 0.0) {
    throw std::runtime_error("convert: give either --alpha or --gamma, not both");
  }
  if (alpha > 0.0) {
    std::cout << human(convert_cost_to_lazy(alpha, T, S)) << "\n";
    return 0;
  }
  if (gamma > 0.0) {
    std::cout << human(convert_lazy_to_cost(gamma, T, c)) << "\n";
    return 0;
  }
  throw std::runtime_error("convert: one of --alpha or --gamma is required");
}

int cmd_validate_sampler(std::size_t samples, std::uint64_t seed) {
  const GaussianSpec q(Vec{0.0}, 1.0);
  const GaussianSpec p(Vec{1.0}, 1.0);
  const double tv = tv_gaussian_1d(q, p);

  SplitRng rng(seed, 0);
  SplitRng direct_rng(seed, 1);
  std::vector<double> coupled, direct;
  coupled.reserve(samples);
  direct.reserve(samples);
  std::size_t resamples = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec x = q.sample(rng);
    CoupledSample cs = lazy_sample(x, q.as_dist(), p.as_dist(), rng);
    if (cs.resampled) ++resamples;
    coupled.push_back(cs.value[0]);
    direct.push_back(p.sample(direct_rng)[0]);
  }
  const double freq = static_cast<double>(resamples) / static_cast<double>(samples);
  // Binomial 4-sigma envelope around the closed-form resample probability.
  const double slack = 4.0 * std::sqrt(tv * (1.0 - tv) / static_cast<double>(samples));
  const bool freq_ok = std::fabs(freq - tv) <= slack;

  std::sort(coupled.begin(), coupled.end());
  std::sort(direct.begin(), direct.end());
  double ks = 0.0;
  std::size_t i = 0, j2 = 0;
  const double n = static_cast<double>(samples);
  while (i < samples && j2 < samples) {
    if (coupled[i] <= direct[j2]) {
      ++i;
    } else {
      ++j2;
    }
    ks = std::max(ks, std::fabs(static_cast<double>(i) / n - static_cast<double>(j2) / n));
  }
  const double ks_crit = 1.628 * std::sqrt(2.0 / n);  // two-sample, 1% level
  const bool ks_ok = ks < ks_crit;

  std::cout << "resample_freq=" << human(freq) << " expected_tv=" << human(tv)
            << " tolerance=" << human(slack) << " -> " << (freq_ok ? "pass" : "fail") << "\n";
  std::cout << "ks_statistic=" << human(ks) << " critical_1pct=" << human(ks_crit) << " -> "
            << (ks_ok ? "pass" : "fail") << "\n";
  return (freq_ok && ks_ok) ? 0 : 2;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Lazy online convex optimization simulation suite"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Play one game and print its summary");
  run_cmd->add_option("--alg", ro.alg,
                      "Algorithm: ftprll-convex, ftprll-sc, lazy-sgd, ogd, blocked-ogd")
      ->capture_default_str();
  run_cmd->add_option("--adversary", ro.adversary,
                      "Adversary: iid-rademacher, iid-bernoulli, iid-isoquad, replay, "
                      "sectioned-bernoulli, adaptive-pusher")
      ->capture_default_str();
  run_cmd->add_option("--T", ro.T, "Number of rounds")->capture_default_str();
  run_cmd->add_option("--S", ro.S, "Switch budget")->capture_default_str();
  run_cmd->add_option("--seed", ro.seed, "Base seed")->capture_default_str();
  run_cmd->add_option("--seeds", ro.seeds, "Number of seeds to average")->capture_default_str();
  run_cmd->add_option("--G", ro.G, "Lipschitz constant")->capture_default_str();
  run_cmd->add_option("--D", ro.D, "Domain diameter")->capture_default_str();
  run_cmd->add_option("--d", ro.d, "Dimension")->capture_default_str();
  run_cmd->add_option("--lambda", ro.lambda, "Strong convexity")->capture_default_str();
  run_cmd->add_option("--sigma", ro.sigma, "Perturbation scale override (0 = tuned)")
      ->capture_default_str();
  run_cmd->add_option("--eta", ro.eta, "Regularizer scale override (0 = tuned)")
      ->capture_default_str();
  run_cmd->add_option("--p", ro.p, "Bernoulli probability")->capture_default_str();
  run_cmd->add_option("--C", ro.C, "Sectioned adversary constant")->capture_default_str();
  run_cmd->add_option("--losses", ro.losses, "Replay loss file")->capture_default_str();
  run_cmd->add_flag("--adaptive", ro.adaptive, "Allow adaptive adversaries");
  run_cmd->add_option("--out", ro.out, "Summary CSV path")->capture_default_str();
  run_cmd->add_option("--trace-dump", ro.trace_dump, "Per-trace JSON dump path")
      ->capture_default_str();

  std::string sweep_config, sweep_out;
  std::size_t jobs = 0;
  bool json_mirror = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of games from a config file");
  sweep_cmd->add_option("--config", sweep_config, "JSON run-config path")->required();
  sweep_cmd->add_option("--out", sweep_out, "Override output CSV path")->capture_default_str();
  sweep_cmd->add_option("--jobs", jobs, "Worker threads (0 = auto)")->capture_default_str();
  sweep_cmd->add_flag("--json", json_mirror, "Also write a JSON mirror next to the CSV");

  std::string tune_alg = "ftprll-convex";
  std::size_t tune_T = 1024, tune_S = 16, tune_d = 1;
  double tune_G = 1.0, tune_D = 2.0, tune_lambda = 0.0, tune_sigma = 0.0, tune_eta = 0.0;
  auto* tune_cmd = app.add_subcommand("tune", "Print closed-form parameters and bounds");
  tune_cmd->add_option("--alg", tune_alg, "Algorithm")->capture_default_str();
  tune_cmd->add_option("--T", tune_T, "Number of rounds")->capture_default_str();
  tune_cmd->add_option("--S", tune_S, "Switch budget")->capture_default_str();
  tune_cmd->add_option("--G", tune_G, "Lipschitz constant")->capture_default_str();
  tune_cmd->add_option("--D", tune_D, "Domain diameter")->capture_default_str();
  tune_cmd->add_option("--lambda", tune_lambda, "Strong convexity")->capture_default_str();
  tune_cmd->add_option("--d", tune_d, "Dimension")->capture_default_str();
  tune_cmd->add_option("--sigma", tune_sigma, "Perturbation override (0 = tuned)")
      ->capture_default_str();
  tune_cmd->add_option("--eta", tune_eta, "Regularizer override (0 = tuned)")
      ->capture_default_str();

  double conv_alpha = 0.0, conv_gamma = 0.0, conv_T = 1.0, conv_S = 1.0, conv_c = 1.0;
  auto* conv_cmd = app.add_subcommand("convert", "Switching-cost regret conversions");
  conv_cmd->add_option("--alpha", conv_alpha, "Cost-regret exponent, converts cost to lazy")
      ->capture_default_str();
  conv_cmd->add_option("--gamma", conv_gamma, "Lazy-regret exponent, converts lazy to cost")
      ->capture_default_str();
  conv_cmd->add_option("--T", conv_T, "Number of rounds")->capture_default_str();
  conv_cmd->add_option("--S", conv_S, "Switch budget")->capture_default_str();
  conv_cmd->add_option("--c", conv_c, "Per-switch cost")->capture_default_str();

  std::size_t vs_samples = 100000;
  std::uint64_t vs_seed = 1;
  auto* vs_cmd = app.add_subcommand("validate-sampler",
                                    "Statistical checks of the coupling sampler");
  vs_cmd->add_option("--samples", vs_samples, "Sample count")->capture_default_str();
  vs_cmd->add_option("--seed", vs_seed, "Base seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(ro);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, sweep_out, jobs, json_mirror);
    if (tune_cmd->parsed()) {
      return cmd_tune(tune_alg, tune_T, tune_S, tune_G, tune_D, tune_lambda, tune_d,
                      tune_sigma, tune_eta);
    }
    if (conv_cmd->parsed()) return cmd_convert(conv_alpha, conv_gamma, conv_T, conv_S, conv_c);
    if (vs_cmd->parsed()) return cmd_validate_sampler(vs_samples, vs_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace lazyoco
