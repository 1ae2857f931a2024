#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lazyoco/adversaries.hpp"
#include "lazyoco/algorithms.hpp"
#include "lazyoco/geometry.hpp"
#include "lazyoco/losses.hpp"

namespace lazyoco {

struct AlgorithmConfig {
  std::string name;  // ftprll-convex | ftprll-sc | lazy-sgd | ogd | blocked-ogd
  std::size_t S = 1;
  double G = 1.0;
  double D = 2.0;
  double lambda = 0.0;
  std::optional<double> sigma;  // manual overrides beat tuned values
  std::optional<double> eta;
};

struct AdversaryConfig {
  std::string name;  // iid-rademacher | iid-bernoulli | iid-isoquad | replay |
                     // sectioned-bernoulli | adaptive-pusher
  double p = 0.5;    // bernoulli coordinate / section sign probability
  std::size_t S = 1;  // sectioned switch budget
  std::size_t C = 1;
  double lambda = 1.0;  // isoquad curvature
  double center_lo = -1.0;
  double center_hi = 1.0;
  std::string losses_path;
  std::shared_ptr<const LossSequence> replay;  // preloaded replay sequence
};

struct RunConfig {
  AlgorithmConfig alg;
  AdversaryConfig adv;
  Domain domain = Domain::box(Vec{-1.0}, Vec{1.0});
  std::size_t T = 1;
  bool adaptive_model = false;  // must be set to run adaptive adversaries
};

// Closed-form parameters and bound values for a target (T, S, G, D, lambda, d).
struct TuningPlan {
  std::string algorithm;
  double sigma = 0.0;          // 0 when the algorithm is unperturbed
  bool sqrt_schedule = false;  // sigma_t = sqrt(t) * sigma
  double eta = 0.0;            // regularizer scale; 0 when R = 0
  std::string step_rule;       // human-readable step-size rule
  double bound_regret = 0.0;
  double bound_switches = 0.0;
};

TuningPlan tune(const std::string& algorithm, std::size_t T, std::size_t S,
                double G, double D, double lambda, std::size_t d,
                std::optional<double> sigma_override = std::nullopt,
                std::optional<double> eta_override = std::nullopt);

// Switching-cost conversions: a cost-c regret of (Tc)^alpha becomes an
// S-lazy regret of (T/S)^(alpha/(1-alpha)), and an S-lazy regret of
// T/S^gamma becomes a cost-c regret of T^(1/(1+gamma)) c^(gamma/(1+gamma)).
double convert_cost_to_lazy(double alpha, double T, double S);
double convert_lazy_to_cost(double gamma, double T, double c);

struct GameTrace {
  std::vector<Vec> decisions;       // length T
  std::vector<double> loss_values;  // length T
  // Length T; flag 0 is the round-1 publish (counted only by algorithms
  // whose switch budget includes the initial commit), flag t the reported
  // change between rounds t and t+1.
  std::vector<bool> switch_flags;
  double regret = 0.0;
  std::size_t switches = 0;
  std::uint64_t seed = 0;
  double wall_time_sec = 0.0;
  bool has_pseudo_regret = false;  // i.i.d. runs only; w* is an estimate
  double pseudo_regret = 0.0;
  LossSequence losses;  // realized sequence
};

std::unique_ptr<Adversary> make_adversary(const AdversaryConfig& cfg, std::size_t T,
                                          const Domain& domain);
std::unique_ptr<Player> make_player(const RunConfig& cfg, const TuningPlan& plan,
                                    SplitRng& rng);
TuningPlan plan_for(const RunConfig& cfg);

// Plays one full game. Player, adversary, and pseudo-optimum estimation use
// streams (seed, 0), (seed, 1), (seed, 2); deterministic given (cfg, seed).
GameTrace run_game(const RunConfig& cfg, std::uint64_t seed);

struct SweepRow {
  std::string algorithm;
  std::string adversary;
  std::size_t T = 0;
  std::size_t S_target = 0;
  std::size_t seeds = 0;
  double regret_mean = 0.0;
  double regret_std = 0.0;
  double switches_mean = 0.0;
  double switches_std = 0.0;
  double bound_regret = 0.0;
  double bound_switches = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;               // canonical (algorithm, adversary, T, S) order
  std::vector<std::string> errors;          // per-cell failures, siblings unaffected
};

// Runs every cell x seed. Seeds derive from (base_seed, canonical cell
// index, seed index), so results do not depend on grid order or on jobs.
SweepResult sweep(std::vector<RunConfig> cells, std::size_t seeds,
                  std::uint64_t base_seed, std::size_t jobs = 0);

std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result);

// Run-config files are JSON; "T", "S", and "algorithm" may be arrays to
// describe a sweep grid.
struct SweepSpec {
  std::vector<RunConfig> cells;
  std::size_t seeds = 1;
  std::uint64_t base_seed = 1;
  std::string out;
};

SweepSpec load_sweep_spec(const std::string& path);

}  // namespace lazyoco
