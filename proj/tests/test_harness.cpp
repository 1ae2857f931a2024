#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "lazyoco/harness.hpp"

using namespace lazyoco;

namespace {

RunConfig basic_ftprll_config() {
  RunConfig cfg;
  cfg.alg.name = "ftprll-convex";
  cfg.alg.S = 16;
  cfg.alg.G = 1.0;
  cfg.alg.D = 2.0;
  cfg.adv.name = "iid-rademacher";
  cfg.domain = Domain::box(Vec{-1.0}, Vec{1.0});
  cfg.T = 256;
  return cfg;
}

bool traces_identical(const GameTrace& a, const GameTrace& b) {
  if (a.decisions.size() != b.decisions.size()) return false;
  for (std::size_t i = 0; i < a.decisions.size(); ++i) {
    if (!bit_equal(a.decisions[i], b.decisions[i])) return false;
    if (a.loss_values[i] != b.loss_values[i]) return false;
    if (a.switch_flags[i] != b.switch_flags[i]) return false;
  }
  return a.regret == b.regret && a.switches == b.switches;
}

}  // namespace

TEST_CASE("tuning closed forms") {
  const TuningPlan convex = tune("ftprll-convex", 1024, 16, 1.0, 2.0, 0.0, 1);
  CHECK(convex.sigma == doctest::Approx(32.0));
  CHECK(convex.eta == doctest::Approx(0.03125));
  CHECK(convex.bound_regret == doctest::Approx(192.0));
  CHECK(convex.bound_switches == doctest::Approx(16.0));

  const TuningPlan sc = tune("ftprll-sc", 1024, 64, 1.0, 2.0, 1.0, 1);
  CHECK(sc.sigma == doctest::Approx(0.5));
  CHECK(sc.sqrt_schedule);
  CHECK(sc.bound_regret ==
        doctest::Approx((2.0 + 2.0 * 0.25) * (1.0 + std::log(1024.0))));

  // S = T collapses the convex scale to G/2.
  CHECK(tune("ftprll-convex", 1024, 1024, 1.0, 2.0, 0.0, 1).sigma ==
        doctest::Approx(0.5));

  const TuningPlan sgd = tune("lazy-sgd", 1000, 1, 1.0, 2.0, 0.0, 1);
  CHECK(sgd.bound_switches == doctest::Approx(10.0));
  CHECK(sgd.bound_regret ==
        doctest::Approx(2.0 * 2.0 * std::sqrt(1000.0) * (1.0 + std::log(1000.0))));
  CHECK(tune("lazy-sgd", 1000, 1, 1.0, 2.0, 1.0, 1).bound_regret ==
        doctest::Approx(std::pow(1.0 + std::log(1000.0), 2.0)));

  CHECK_THROWS_AS(tune("ftprll-sc", 100, 10, 1.0, 2.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(tune("unknown", 100, 10, 1.0, 2.0, 0.0, 1), std::invalid_argument);

  // Overrides replace the tuned values and flow into the bounds.
  const TuningPlan forced = tune("ftprll-convex", 1024, 16, 1.0, 2.0, 0.0, 1, 8.0);
  CHECK(forced.sigma == doctest::Approx(8.0));
  CHECK(forced.bound_switches == doctest::Approx(64.0));
}

TEST_CASE("conversion formulas") {
  CHECK(convert_cost_to_lazy(0.5, 1000.0, 10.0) == doctest::Approx(100.0));
  CHECK(convert_cost_to_lazy(1.0 / 3.0, 50.0, 50.0) == doctest::Approx(1.0));
  CHECK(convert_cost_to_lazy(2.0 / 3.0, 100.0, 10.0) == doctest::Approx(100.0));
  CHECK(convert_lazy_to_cost(1.0, 400.0, 4.0) == doctest::Approx(40.0));
  CHECK(convert_lazy_to_cost(2.0, 1000.0, 1.0) == doctest::Approx(10.0));
  CHECK(convert_lazy_to_cost(3.5, 77.0, 1.0) ==
        doctest::Approx(std::pow(77.0, 1.0 / 4.5)));
  CHECK_THROWS_AS(convert_cost_to_lazy(1.0, 10.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(convert_cost_to_lazy(0.0, 10.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(convert_lazy_to_cost(-1.0, 10.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(convert_lazy_to_cost(1.0, 10.0, 0.5), std::invalid_argument);
}

TEST_CASE("zero replay losses give zero regret and switches") {
  auto zeros = std::make_shared<LossSequence>();
  for (int i = 0; i < 5; ++i) zeros->push_back(LossFn::linear(Vec{0.0}));
  RunConfig cfg;
  cfg.alg.name = "ogd";
  cfg.adv.name = "replay";
  cfg.adv.replay = zeros;
  cfg.domain = Domain::box(Vec{-1.0}, Vec{1.0});
  cfg.T = 5;
  const GameTrace trace = run_game(cfg, 7);
  CHECK(trace.regret == doctest::Approx(0.0));
  CHECK(trace.switches == 0);
}

TEST_CASE("identical seeds give bit-identical traces") {
  const RunConfig cfg = basic_ftprll_config();
  CHECK(traces_identical(run_game(cfg, 42), run_game(cfg, 42)));
}

TEST_CASE("trace invariants on random runs") {
  SplitRng seeder(171);
  for (const char* alg : {"ftprll-convex", "lazy-sgd", "ogd", "blocked-ogd"}) {
    RunConfig cfg = basic_ftprll_config();
    cfg.alg.name = alg;
    for (int rep = 0; rep < 5; ++rep) {
      const GameTrace trace = run_game(cfg, seeder.next_u64());
      REQUIRE(trace.decisions.size() == cfg.T);
      REQUIRE(trace.switch_flags.size() == cfg.T);
      // Realized regret can dip below zero by luck; it must still equal the
      // recomputed gap to the hindsight optimum.
      double total = 0.0;
      for (double v : trace.loss_values) total += v;
      CHECK(trace.regret ==
            doctest::Approx(total - offline_optimum(trace.losses, cfg.domain).value)
                .epsilon(1e-12));
      std::size_t count = 0;
      for (bool f : trace.switch_flags) count += f ? 1 : 0;
      CHECK(count == trace.switches);
      for (std::size_t t = 0; t + 1 < cfg.T; ++t) {
        if (!trace.switch_flags[t + 1]) {
          REQUIRE(bit_equal(trace.decisions[t], trace.decisions[t + 1]));
        }
      }
      CHECK(trace.has_pseudo_regret);
    }
  }
}

TEST_CASE("first commit counts only for block publishers") {
  RunConfig cfg = basic_ftprll_config();
  cfg.T = 16;
  CHECK_FALSE(run_game(cfg, 5).switch_flags[0]);
  cfg.alg.name = "lazy-sgd";
  CHECK(run_game(cfg, 5).switch_flags[0]);
}

TEST_CASE("adaptive adversaries need the adaptive model flag") {
  RunConfig cfg;
  cfg.alg.name = "blocked-ogd";
  cfg.alg.S = 4;
  cfg.alg.G = 2.0;
  cfg.alg.lambda = 1.0;
  cfg.adv.name = "adaptive-pusher";
  cfg.domain = Domain::box(Vec{-1.0}, Vec{1.0});
  cfg.T = 64;
  CHECK_THROWS_AS(run_game(cfg, 3), std::runtime_error);
  cfg.adaptive_model = true;
  const GameTrace trace = run_game(cfg, 3);
  CHECK(trace.regret >= -1e-9);
  CHECK(trace.switches <= 4);
}

TEST_CASE("mean switch count respects the expected-switch bound") {
  RunConfig cfg = basic_ftprll_config();
  cfg.T = 1024;
  const std::size_t seeds = 50;
  double mean = 0.0;
  for (std::size_t j = 0; j < seeds; ++j) mean += static_cast<double>(run_game(cfg, 900 + j).switches);
  mean /= static_cast<double>(seeds);
  CHECK(mean <= 16.0 * (1.0 + 3.0 / std::sqrt(static_cast<double>(seeds))));
}

TEST_CASE("single cell sweep matches direct runs") {
  const RunConfig cfg = basic_ftprll_config();
  const SweepResult res = sweep({cfg}, 1, 77, 1);
  REQUIRE(res.rows.size() == 1);
  REQUIRE(res.errors.empty());
  const GameTrace trace = run_game(cfg, mix64(77, 0, 0));
  CHECK(res.rows[0].regret_mean == doctest::Approx(trace.regret));
  CHECK(res.rows[0].switches_mean == doctest::Approx(static_cast<double>(trace.switches)));
  CHECK(res.rows[0].regret_std == 0.0);
  const TuningPlan plan = plan_for(cfg);
  CHECK(res.rows[0].bound_regret == doctest::Approx(plan.bound_regret).epsilon(1e-12));
  CHECK(res.rows[0].bound_switches == doctest::Approx(plan.bound_switches).epsilon(1e-12));
}

TEST_CASE("sweep output is independent of grid order and parallelism") {
  std::vector<RunConfig> grid;
  for (std::size_t S : {8, 16, 32}) {
    for (std::size_t T : {64, 128}) {
      RunConfig cfg = basic_ftprll_config();
      cfg.alg.S = S;
      cfg.T = T;
      grid.push_back(cfg);
    }
  }
  const std::string reference = sweep_to_csv(sweep(grid, 3, 5, 1));

  std::vector<RunConfig> shuffled = grid;
  std::mt19937 shuffle_rng(99);
  std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);
  CHECK(sweep_to_csv(sweep(shuffled, 3, 5, 1)) == reference);
  CHECK(sweep_to_csv(sweep(grid, 3, 5, 4)) == reference);

  CHECK(reference.substr(0, reference.find('\n')) ==
        "algorithm,adversary,T,S_target,seeds,regret_mean,regret_std,"
        "switches_mean,switches_std,bound_regret,bound_switches");
}

TEST_CASE("failing cells do not abort siblings") {
  RunConfig good = basic_ftprll_config();
  good.T = 32;
  RunConfig bad = good;
  bad.alg.name = "ftprll-sc";  // lambda = 0: tuning must fail
  const SweepResult res = sweep({good, bad}, 2, 9, 2);
  CHECK(res.rows.size() == 1);
  CHECK(res.errors.size() == 1);
  CHECK(res.rows[0].algorithm == "ftprll-convex");
}

TEST_CASE("json mirror carries the same rows") {
  const SweepResult res = sweep({basic_ftprll_config()}, 2, 13, 1);
  const std::string json = sweep_to_json(res);
  CHECK(json.find("\"algorithm\": \"ftprll-convex\"") != std::string::npos);
  CHECK(json.find("\"errors\": []") != std::string::npos);
}

TEST_CASE("sweep spec files expand into grids") {
  const std::string path = "harness_spec_test.json";
  {
    std::ofstream out(path);
    out << R"({
      "algorithm": ["ftprll-convex", {"name": "ftprll-sc", "lambda": 1.0, "sigma": 0.5}],
      "adversary": {"name": "iid-isoquad", "lambda": 1.0},
      "T": [64, 128],
      "S": [8, 16],
      "G": 2.0, "D": 2.0, "d": 1,
      "seeds": 3, "seed": 21, "out": "spec_out.csv"
    })";
  }
  const SweepSpec spec = load_sweep_spec(path);
  CHECK(spec.cells.size() == 8);
  CHECK(spec.seeds == 3);
  CHECK(spec.base_seed == 21);
  CHECK(spec.out == "spec_out.csv");
  bool saw_override = false;
  for (const auto& cell : spec.cells) {
    CHECK(cell.adv.name == "iid-isoquad");
    CHECK(cell.alg.G == doctest::Approx(2.0));
    if (cell.alg.name == "ftprll-sc") {
      REQUIRE(cell.alg.sigma.has_value());
      CHECK(*cell.alg.sigma == doctest::Approx(0.5));
      saw_override = true;
    }
  }
  CHECK(saw_override);
  const SweepResult res = sweep(spec.cells, spec.seeds, spec.base_seed, 2);
  CHECK(res.errors.empty());
  CHECK(res.rows.size() == 8);
  std::remove(path.c_str());
}

TEST_CASE("pseudo regret estimation stays near zero for symmetric losses") {
  RunConfig cfg = basic_ftprll_config();
  cfg.alg.name = "ogd";
  cfg.T = 64;
  const GameTrace trace = run_game(cfg, 31);
  REQUIRE(trace.has_pseudo_regret);
  // The estimated mean gradient is within ~3/sqrt(10^6) of zero, so the
  // pseudo-regret of 64 bounded decisions is a few times 64 * 0.003.
  CHECK(std::fabs(trace.pseudo_regret) < 1.0);
}
