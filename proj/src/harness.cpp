#include "lazyoco/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace lazyoco {

namespace {

constexpr std::size_t kPseudoSamples = 1000000;

std::size_t floor_log2(std::size_t n) {
  std::size_t k = 0;
  while (n >>= 1) ++k;
  return k;
}

double sum_inv_sqrt(std::size_t T) {
  double s = 0.0;
  for (std::size_t t = 1; t <= T; ++t) s += 1.0 / std::sqrt(static_cast<double>(t));
  return s;
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TuningPlan tune(const std::string& algorithm, std::size_t T, std::size_t S,
                double G, double D, double lambda, std::size_t d,
                std::optional<double> sigma_override,
                std::optional<double> eta_override) {
  if (T < 1 || S < 1 || !(G > 0.0) || !(D > 0.0) || d < 1) {
    throw std::invalid_argument("tune: T, S, G, D, d must be positive");
  }
  const double Td = static_cast<double>(T);
  const double Sd = static_cast<double>(S);
  TuningPlan plan;
  plan.algorithm = algorithm;
  if (algorithm == "ftprll-convex") {
    plan.sigma = sigma_override.value_or(G * Td / (2.0 * Sd));
    plan.eta = eta_override.value_or(D / (2.0 * G * std::sqrt(Td)));
    plan.bound_regret = 2.0 * plan.eta * G * G * Td + D * D / (2.0 * plan.eta) +
                        plan.sigma * std::sqrt(static_cast<double>(d)) * D;
    plan.bound_switches = G * Td / (2.0 * plan.sigma);
  } else if (algorithm == "ftprll-sc") {
    if (!(lambda > 0.0)) {
      throw std::invalid_argument("tune: ftprll-sc requires lambda > 0");
    }
    plan.sigma = sigma_override.value_or(G * std::sqrt(Td) / Sd);
    plan.sqrt_schedule = true;
    plan.bound_regret = (2.0 * G * G + 2.0 * static_cast<double>(d) * plan.sigma * plan.sigma) *
                        (1.0 + std::log(Td)) / lambda;
    plan.bound_switches = G / (2.0 * plan.sigma) * sum_inv_sqrt(T);
  } else if (algorithm == "lazy-sgd") {
    if (lambda > 0.0) {
      plan.step_rule = "1/(lambda t)";
      plan.bound_regret = G * G / lambda * std::pow(1.0 + std::log(Td), 2.0);
    } else {
      plan.step_rule = "D/(G sqrt(t))";
      plan.bound_regret = 2.0 * D * G * std::sqrt(Td) * (1.0 + std::log(Td));
    }
    plan.bound_switches = static_cast<double>(floor_log2(T) + 1);
  } else if (algorithm == "ogd") {
    if (lambda > 0.0) {
      plan.step_rule = "1/(lambda t)";
      plan.bound_regret = G * G / (2.0 * lambda) * (1.0 + std::log(Td));
    } else {
      plan.step_rule = "D/(G sqrt(t))";
      plan.bound_regret = 1.5 * G * D * std::sqrt(Td);
    }
    plan.bound_switches = static_cast<double>(T - 1);
  } else if (algorithm == "blocked-ogd") {
    // Blocking plays an S-round game with constants scaled by T/S.
    const double ratio = Td / Sd;
    if (lambda > 0.0) {
      plan.step_rule = "1/(lambda t)";
      plan.bound_regret = ratio * G * G / (2.0 * lambda) * (1.0 + std::log(Sd));
    } else {
      plan.step_rule = "D/(G sqrt(t))";
      plan.bound_regret = 1.5 * G * D * Td / std::sqrt(Sd);
    }
    plan.bound_switches = Sd;
  } else {
    throw std::invalid_argument("tune: unknown algorithm '" + algorithm + "'");
  }
  return plan;
}

double convert_cost_to_lazy(double alpha, double T, double S) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("convert_cost_to_lazy: alpha must lie in (0, 1)");
  }
  if (!(T > 0.0 && S > 0.0)) {
    throw std::invalid_argument("convert_cost_to_lazy: T and S must be positive");
  }
  return std::pow(T / S, alpha / (1.0 - alpha));
}

double convert_lazy_to_cost(double gamma, double T, double c) {
  if (!(gamma > 0.0)) throw std::invalid_argument("convert_lazy_to_cost: gamma must be positive");
  if (!(T > 0.0) || !(c >= 1.0)) {
    throw std::invalid_argument("convert_lazy_to_cost: require T > 0 and c >= 1");
  }
  return std::pow(T, 1.0 / (1.0 + gamma)) * std::pow(c, gamma / (1.0 + gamma));
}

std::unique_ptr<Adversary> make_adversary(const AdversaryConfig& cfg, std::size_t T,
                                          const Domain& domain) {
  if (cfg.name == "iid-rademacher") {
    return std::make_unique<IidAdversary>(IidAdversary::rademacher_linear(domain.dimension()));
  }
  if (cfg.name == "iid-bernoulli") {
    return std::make_unique<IidAdversary>(
        IidAdversary::bernoulli_linear(domain.dimension(), cfg.p));
  }
  if (cfg.name == "iid-isoquad") {
    return std::make_unique<IidAdversary>(
        IidAdversary::iso_quadratic_uniform(cfg.lambda, cfg.center_lo, cfg.center_hi, domain));
  }
  if (cfg.name == "replay") {
    if (cfg.replay) return std::make_unique<ReplayAdversary>(*cfg.replay);
    if (cfg.losses_path.empty()) {
      throw std::invalid_argument("make_adversary: replay requires a loss sequence");
    }
    std::ifstream in(cfg.losses_path);
    if (!in) throw std::runtime_error("make_adversary: cannot open " + cfg.losses_path);
    return std::make_unique<ReplayAdversary>(LossSequence::load(in));
  }
  if (cfg.name == "sectioned-bernoulli") {
    return std::make_unique<SectionedBernoulliAdversary>(cfg.p, cfg.S, cfg.C, T);
  }
  if (cfg.name == "adaptive-pusher") {
    if (domain.dimension() != 1) {
      throw std::invalid_argument("make_adversary: adaptive-pusher requires d = 1");
    }
    return std::make_unique<AdaptivePusherAdversary>(T);
  }
  throw std::invalid_argument("make_adversary: unknown adversary '" + cfg.name + "'");
}

TuningPlan plan_for(const RunConfig& cfg) {
  return tune(cfg.alg.name, cfg.T, cfg.alg.S, cfg.alg.G, cfg.alg.D, cfg.alg.lambda,
              cfg.domain.dimension(), cfg.alg.sigma, cfg.alg.eta);
}

std::unique_ptr<Player> make_player(const RunConfig& cfg, const TuningPlan& plan,
                                    SplitRng& rng) {
  const auto& a = cfg.alg;
  if (a.name == "ftprll-convex") {
    return std::make_unique<FtprllPlayer>(
        cfg.domain, PerturbationSchedule::constant(plan.sigma),
        Regularizer::quadratic(plan.eta, cfg.domain.center()), rng, a.G);
  }
  if (a.name == "ftprll-sc") {
    return std::make_unique<FtprllPlayer>(
        cfg.domain, PerturbationSchedule::sqrt_scaled(plan.sigma), Regularizer::none(),
        rng, a.G);
  }
  if (a.name == "lazy-sgd") {
    auto step = a.lambda > 0.0 ? LazySgdPlayer::strongly_convex_step(a.lambda)
                               : LazySgdPlayer::general_step(a.D, a.G);
    return std::make_unique<LazySgdPlayer>(cfg.domain, std::move(step));
  }
  if (a.name == "ogd") {
    auto step = a.lambda > 0.0 ? LazySgdPlayer::strongly_convex_step(a.lambda)
                               : LazySgdPlayer::general_step(a.D, a.G);
    return std::make_unique<OgdPlayer>(cfg.domain, std::move(step));
  }
  if (a.name == "blocked-ogd") {
    return std::make_unique<BlockedOgdPlayer>(cfg.domain, cfg.T, a.S, a.G, a.lambda);
  }
  throw std::invalid_argument("make_player: unknown algorithm '" + a.name + "'");
}

namespace {

// Estimated average loss for the i.i.d. families, from fresh samples.
struct MeanLoss {
  bool linear = false;
  Vec grad_or_center;
  double lambda = 0.0;
  double center_sq_mean = 0.0;

  double eval(const Vec& w) const {
    if (linear) return dot(grad_or_center, w);
    return 0.5 * lambda *
           (norm2_sq(w) - 2.0 * dot(grad_or_center, w) + center_sq_mean);
  }
};

MeanLoss estimate_mean_loss(const AdversaryConfig& adv, const Domain& domain,
                            SplitRng& rng) {
  const std::size_t d = domain.dimension();
  MeanLoss m;
  if (adv.name == "iid-rademacher" || adv.name == "iid-bernoulli") {
    const double p = adv.name == "iid-rademacher" ? 0.5 : adv.p;
    m.linear = true;
    m.grad_or_center = zeros(d);
    for (std::size_t s = 0; s < kPseudoSamples; ++s) {
      for (std::size_t i = 0; i < d; ++i) {
        m.grad_or_center[i] += rng.bernoulli(p) ? 1.0 : -1.0;
      }
    }
    m.grad_or_center = scale(std::move(m.grad_or_center),
                             1.0 / static_cast<double>(kPseudoSamples));
    return m;
  }
  if (adv.name == "iid-isoquad") {
    m.lambda = adv.lambda;
    m.grad_or_center = zeros(d);
    for (std::size_t s = 0; s < kPseudoSamples; ++s) {
      double sq = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double c = rng.uniform(adv.center_lo, adv.center_hi);
        m.grad_or_center[i] += c;
        sq += c * c;
      }
      m.center_sq_mean += sq;
    }
    const double inv = 1.0 / static_cast<double>(kPseudoSamples);
    m.grad_or_center = scale(std::move(m.grad_or_center), inv);
    m.center_sq_mean *= inv;
    return m;
  }
  throw std::logic_error("estimate_mean_loss: not an i.i.d. family");
}

}  // namespace

GameTrace run_game(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.T < 1) throw std::invalid_argument("run_game: T must be positive");
  const auto start = std::chrono::steady_clock::now();
  SplitRng player_rng(seed, 0);
  SplitRng adversary_rng(seed, 1);

  auto adversary = make_adversary(cfg.adv, cfg.T, cfg.domain);
  if (adversary->adaptive() && !cfg.adaptive_model) {
    throw std::runtime_error(
        "run_game: adaptive adversary requires adaptive_model in the run config");
  }
  const TuningPlan plan = plan_for(cfg);
  auto player = make_player(cfg, plan, player_rng);

  GameTrace trace;
  trace.seed = seed;
  trace.decisions.reserve(cfg.T);
  trace.loss_values.reserve(cfg.T);
  trace.switch_flags.assign(cfg.T, false);
  trace.switch_flags[0] = player->first_commit_counts();

  for (std::size_t t = 1; t <= cfg.T; ++t) {
    const Vec& w = player->decision();
    const Vec* seen = adversary->adaptive() ? &w : nullptr;
    LossFn f = adversary->next_loss(t, seen, adversary_rng);
    trace.decisions.push_back(w);
    trace.loss_values.push_back(f.eval(w));
    trace.losses.push_back(f);
    if (t < cfg.T) {
      trace.switch_flags[t] = player->advance(f, player_rng);
    }
  }

  trace.switches = 0;
  for (bool flag : trace.switch_flags) trace.switches += flag ? 1 : 0;

  double total = 0.0;
  for (double v : trace.loss_values) total += v;
  trace.regret = total - offline_optimum(trace.losses, cfg.domain).value;

  if (cfg.adv.name.rfind("iid-", 0) == 0) {
    SplitRng pseudo_rng(seed, 2);
    const MeanLoss mean = estimate_mean_loss(cfg.adv, cfg.domain, pseudo_rng);
    Vec w_star;
    if (mean.linear) {
      w_star = cfg.domain.linear_minimizer(mean.grad_or_center, cfg.domain.center());
    } else {
      w_star = cfg.domain.project(mean.grad_or_center);
    }
    double played = 0.0;
    for (const Vec& w : trace.decisions) played += mean.eval(w);
    trace.pseudo_regret = played - static_cast<double>(cfg.T) * mean.eval(w_star);
    trace.has_pseudo_regret = true;
  }

  trace.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

namespace {

struct CellStats {
  bool ok = false;
  SweepRow row;
  std::string error;
};

std::tuple<std::string, std::string, std::size_t, std::size_t> cell_key(const RunConfig& c) {
  return {c.alg.name, c.adv.name, c.T, c.alg.S};
}

void run_cell(const RunConfig& cfg, std::size_t cell_idx, std::size_t seeds,
              std::uint64_t base_seed, CellStats& out) {
  try {
    std::vector<double> regrets, switches;
    regrets.reserve(seeds);
    switches.reserve(seeds);
    for (std::size_t j = 0; j < seeds; ++j) {
      GameTrace tr = run_game(cfg, mix64(base_seed, cell_idx, j));
      regrets.push_back(tr.regret);
      switches.push_back(static_cast<double>(tr.switches));
    }
    auto mean_std = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      double s = 0.0;
      if (v.size() > 1) {
        for (double x : v) s += (x - m) * (x - m);
        s = std::sqrt(s / static_cast<double>(v.size() - 1));
      }
      return std::pair<double, double>{m, s};
    };
    const TuningPlan plan = plan_for(cfg);
    SweepRow row;
    row.algorithm = cfg.alg.name;
    row.adversary = cfg.adv.name;
    row.T = cfg.T;
    row.S_target = cfg.alg.S;
    row.seeds = seeds;
    std::tie(row.regret_mean, row.regret_std) = mean_std(regrets);
    std::tie(row.switches_mean, row.switches_std) = mean_std(switches);
    row.bound_regret = plan.bound_regret;
    row.bound_switches = plan.bound_switches;
    out.row = std::move(row);
    out.ok = true;
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "cell " << cell_idx << " (" << cfg.alg.name << ", " << cfg.adv.name
       << ", T=" << cfg.T << ", S=" << cfg.alg.S << "): " << e.what();
    out.error = os.str();
  }
}

}  // namespace

SweepResult sweep(std::vector<RunConfig> cells, std::size_t seeds,
                  std::uint64_t base_seed, std::size_t jobs) {
  if (cells.empty()) throw std::invalid_argument("sweep: empty grid");
  if (seeds < 1) throw std::invalid_argument("sweep: seeds must be >= 1");
  // Canonical cell order; seed derivation uses the sorted index so grid
  // order never affects results.
  std::stable_sort(cells.begin(), cells.end(), [](const RunConfig& a, const RunConfig& b) {
    return cell_key(a) < cell_key(b);
  });
  std::vector<CellStats> stats(cells.size());

  std::size_t workers = jobs;
  if (workers == 0) {
    workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, cells.size());

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      run_cell(cells[i], i, seeds, base_seed, stats[i]);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  for (auto& s : stats) {
    if (s.ok) {
      result.rows.push_back(std::move(s.row));
    } else {
      result.errors.push_back(std::move(s.error));
    }
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "algorithm,adversary,T,S_target,seeds,regret_mean,regret_std,"
        "switches_mean,switches_std,bound_regret,bound_switches\n";
  for (const auto& r : result.rows) {
    os << r.algorithm << ',' << r.adversary << ',' << r.T << ',' << r.S_target << ','
       << r.seeds << ',' << format_full(r.regret_mean) << ',' << format_full(r.regret_std)
       << ',' << format_full(r.switches_mean) << ',' << format_full(r.switches_std) << ','
       << format_full(r.bound_regret) << ',' << format_full(r.bound_switches) << '\n';
  }
  return os.str();
}

std::string sweep_to_json(const SweepResult& result) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : result.rows) {
    j["rows"].push_back({{"algorithm", r.algorithm},
                         {"adversary", r.adversary},
                         {"T", r.T},
                         {"S_target", r.S_target},
                         {"seeds", r.seeds},
                         {"regret_mean", r.regret_mean},
                         {"regret_std", r.regret_std},
                         {"switches_mean", r.switches_mean},
                         {"switches_std", r.switches_std},
                         {"bound_regret", r.bound_regret},
                         {"bound_switches", r.bound_switches}});
  }
  j["errors"] = result.errors;
  return j.dump(2) + "\n";
}

namespace {

Domain parse_domain(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "box") {
    return Domain::box(j.at("lower").get<Vec>(), j.at("upper").get<Vec>());
  }
  if (kind == "ball") {
    return Domain::ball(j.at("center").get<Vec>(), j.at("radius").get<double>());
  }
  throw std::invalid_argument("run config: unknown domain kind '" + kind + "'");
}

Domain default_domain(std::size_t d, double D) {
  // Box with the requested Euclidean diameter, centered at the origin.
  const double half = D / (2.0 * std::sqrt(static_cast<double>(d)));
  return Domain::box(Vec(d, -half), Vec(d, half));
}

AdversaryConfig parse_adversary(const nlohmann::json& j) {
  AdversaryConfig adv;
  if (j.is_string()) {
    adv.name = j.get<std::string>();
    return adv;
  }
  adv.name = j.at("name").get<std::string>();
  if (j.contains("p")) adv.p = j["p"].get<double>();
  if (j.contains("S")) adv.S = j["S"].get<std::size_t>();
  if (j.contains("C")) adv.C = j["C"].get<std::size_t>();
  if (j.contains("lambda")) adv.lambda = j["lambda"].get<double>();
  if (j.contains("center_lo")) adv.center_lo = j["center_lo"].get<double>();
  if (j.contains("center_hi")) adv.center_hi = j["center_hi"].get<double>();
  if (j.contains("losses")) {
    adv.losses_path = j["losses"].get<std::string>();
    std::ifstream in(adv.losses_path);
    if (!in) throw std::runtime_error("run config: cannot open " + adv.losses_path);
    adv.replay = std::make_shared<LossSequence>(LossSequence::load(in));
  }
  return adv;
}

}  // namespace

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("run config: cannot open " + path);
  nlohmann::json j;
  in >> j;

  SweepSpec spec;
  spec.seeds = j.value("seeds", std::size_t{1});
  spec.base_seed = j.value("seed", std::uint64_t{1});
  spec.out = j.value("out", std::string{});

  auto as_list = [&](const char* key) {
    std::vector<nlohmann::json> items;
    if (!j.contains(key)) return items;
    if (j[key].is_array()) {
      for (const auto& e : j[key]) items.push_back(e);
    } else {
      items.push_back(j[key]);
    }
    return items;
  };

  const auto algorithms = as_list("algorithm");
  const auto horizons = as_list("T");
  const auto budgets = as_list("S");
  if (algorithms.empty() || horizons.empty()) {
    throw std::invalid_argument("run config: 'algorithm' and 'T' are required");
  }

  const double G = j.value("G", 1.0);
  const double D = j.value("D", 2.0);
  const double lambda = j.value("lambda", 0.0);
  const std::size_t d = j.value("d", std::size_t{1});
  const AdversaryConfig adv =
      parse_adversary(j.contains("adversary") ? j["adversary"]
                                              : nlohmann::json("iid-rademacher"));
  const Domain domain = j.contains("domain") ? parse_domain(j["domain"]) : default_domain(d, D);
  const bool adaptive = j.value("adaptive", false);

  for (const auto& alg_entry : algorithms) {
    AlgorithmConfig alg;
    alg.G = G;
    alg.D = D;
    alg.lambda = lambda;
    if (alg_entry.is_string()) {
      alg.name = alg_entry.get<std::string>();
    } else {
      alg.name = alg_entry.at("name").get<std::string>();
      if (alg_entry.contains("G")) alg.G = alg_entry["G"].get<double>();
      if (alg_entry.contains("D")) alg.D = alg_entry["D"].get<double>();
      if (alg_entry.contains("lambda")) alg.lambda = alg_entry["lambda"].get<double>();
      if (alg_entry.contains("sigma")) alg.sigma = alg_entry["sigma"].get<double>();
      if (alg_entry.contains("eta")) alg.eta = alg_entry["eta"].get<double>();
    }
    for (const auto& t_entry : horizons) {
      const std::size_t T = t_entry.get<std::size_t>();
      std::vector<std::size_t> cell_budgets;
      if (budgets.empty()) {
        cell_budgets.push_back(1);
      } else {
        for (const auto& s_entry : budgets) cell_budgets.push_back(s_entry.get<std::size_t>());
      }
      for (std::size_t S : cell_budgets) {
        RunConfig cfg;
        cfg.alg = alg;
        cfg.alg.S = S;
        cfg.adv = adv;
        cfg.adv.S = S;
        cfg.domain = domain;
        cfg.T = T;
        cfg.adaptive_model = adaptive;
        spec.cells.push_back(std::move(cfg));
      }
    }
  }
  return spec;
}

}  // namespace lazyoco
