#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lazyoco/losses.hpp"

using namespace lazyoco;

namespace {

Vec random_point(SplitRng& rng, std::size_t d, double span) {
  Vec x(d);
  for (double& v : x) v = rng.uniform(-span, span);
  return x;
}

}  // namespace

TEST_CASE("eval examples") {
  CHECK(LossFn::linear(Vec{1.0, -1.0}).eval(Vec{0.5, 0.5}) == doctest::Approx(0.0));
  CHECK(LossFn::iso_quadratic(1.0, Vec{0.3}, 2.0).eval(Vec{0.5}) ==
        doctest::Approx(0.02).epsilon(1e-12));
  CHECK(LossFn::linear(Vec{1.0}).eval(Vec{-1.0}) == doctest::Approx(-1.0));
}

TEST_CASE("gradient examples") {
  CHECK(LossFn::linear(Vec{2.0, 0.0}).gradient(Vec{7.0, -3.0}) == Vec{2.0, 0.0});
  const Vec g = LossFn::iso_quadratic(2.0, Vec{1.0, 0.0}, 4.0).gradient(Vec{0.0, 0.0});
  CHECK(g[0] == doctest::Approx(-2.0));
  CHECK(g[1] == doctest::Approx(0.0));
  const LossFn quartic = LossFn::custom(
      [](const Vec& w) { return w[0] * w[0] * w[0] * w[0]; },
      [](const Vec& w) { return Vec{4.0 * w[0] * w[0] * w[0]}; }, 1, 4.0, 0.0);
  CHECK(quartic.gradient(Vec{0.0})[0] == doctest::Approx(0.0));
}

TEST_CASE("gradients match central differences") {
  SplitRng rng(17);
  std::vector<LossFn> losses;
  losses.push_back(LossFn::linear(Vec{0.7, -1.3}));
  losses.push_back(LossFn::iso_quadratic(1.7, Vec{0.4, -0.2}, 10.0));
  losses.push_back(LossFn::custom(
      [](const Vec& w) { return std::cosh(w[0]) + 0.5 * w[1] * w[1]; },
      [](const Vec& w) { return Vec{std::sinh(w[0]), w[1]}; }, 2, 10.0, 0.0));
  for (const LossFn& f : losses) {
    for (int trial = 0; trial < 100; ++trial) {
      Vec w = random_point(rng, 2, 1.0);
      const Vec g = f.gradient(w);
      for (std::size_t i = 0; i < 2; ++i) {
        Vec hi = w, lo = w;
        hi[i] += 1e-6;
        lo[i] -= 1e-6;
        const double fd = (f.eval(hi) - f.eval(lo)) / 2e-6;
        CHECK(std::fabs(fd - g[i]) < 1e-4);
      }
    }
  }
}

TEST_CASE("metadata and declared constants") {
  const LossFn lin = LossFn::linear(Vec{3.0, 4.0});
  CHECK(lin.lipschitz() == doctest::Approx(5.0));
  CHECK(lin.strong_convexity() == 0.0);

  const Domain dom = Domain::box(Vec{-1.0}, Vec{1.0});
  const LossFn q = LossFn::iso_quadratic_on(1.0, Vec{0.0}, dom);
  CHECK(q.lipschitz() == doctest::Approx(2.0));  // lambda (D + dist(center, W))
  const LossFn q2 = LossFn::iso_quadratic_on(2.0, Vec{3.0}, dom);
  CHECK(q2.lipschitz() == doctest::Approx(2.0 * (2.0 + 2.0)));
}

TEST_CASE("offline optimum examples") {
  const Domain dom = Domain::box(Vec{-1.0}, Vec{1.0});

  LossSequence lin;
  lin.push_back(LossFn::linear(Vec{1.0}));
  lin.push_back(LossFn::linear(Vec{-1.0}));
  lin.push_back(LossFn::linear(Vec{1.0}));
  const OfflineOptimum o1 = offline_optimum(lin, dom);
  CHECK(o1.w_star[0] == doctest::Approx(-1.0));
  CHECK(o1.value == doctest::Approx(-1.0));

  LossSequence quads;
  quads.push_back(LossFn::iso_quadratic(1.0, Vec{0.2}, 3.0));
  quads.push_back(LossFn::iso_quadratic(1.0, Vec{0.4}, 3.0));
  CHECK(offline_optimum(quads, dom).w_star[0] == doctest::Approx(0.3));

  LossSequence zero;
  zero.push_back(LossFn::linear(Vec{0.0}));
  const OfflineOptimum o3 = offline_optimum(zero, dom);
  CHECK(o3.value == doctest::Approx(0.0));
  CHECK(dom.contains(o3.w_star, 1e-9));
}

TEST_CASE("offline optimum beats random feasible points") {
  SplitRng rng(23);
  const Domain dom = Domain::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0});
  for (int trial = 0; trial < 50; ++trial) {
    LossSequence seq;
    const int kind = trial % 3;
    const std::size_t T = 1 + rng.next_u64() % 8;
    for (std::size_t t = 0; t < T; ++t) {
      if (kind == 0) {
        seq.push_back(LossFn::linear(random_point(rng, 2, 1.0)));
      } else if (kind == 1) {
        seq.push_back(LossFn::iso_quadratic(1.5, random_point(rng, 2, 1.0), 10.0));
      } else {
        const Vec c = random_point(rng, 2, 1.0);
        seq.push_back(LossFn::custom(
            [c](const Vec& w) {
              double s = 0.0;
              for (std::size_t i = 0; i < w.size(); ++i) {
                const double d = w[i] - c[i];
                s += d * d;
              }
              return s;
            },
            [c](const Vec& w) {
              Vec g(w.size());
              for (std::size_t i = 0; i < w.size(); ++i) g[i] = 2.0 * (w[i] - c[i]);
              return g;
            },
            2, 10.0, 2.0));
      }
    }
    const OfflineOptimum opt = offline_optimum(seq, dom);
    auto total = [&](const Vec& w) {
      double s = 0.0;
      for (std::size_t i = 0; i < seq.size(); ++i) s += seq[i].eval(w);
      return s;
    };
    CHECK(opt.value == doctest::Approx(total(opt.w_star)).epsilon(1e-9));
    for (int m = 0; m < 100; ++m) {
      CHECK(opt.value <= total(dom.project(random_point(rng, 2, 2.0))) + 1e-7);
    }
  }
}

TEST_CASE("leader sequence examples and agreement") {
  const Domain dom = Domain::box(Vec{-1.0}, Vec{1.0});

  LossSequence quads;
  quads.push_back(LossFn::iso_quadratic(1.0, Vec{0.0}, 3.0));
  quads.push_back(LossFn::iso_quadratic(1.0, Vec{1.0}, 3.0));
  const auto leaders = leader_sequence(quads, dom);
  REQUIRE(leaders.size() == 2);
  CHECK(leaders[0][0] == doctest::Approx(0.0));
  CHECK(leaders[1][0] == doctest::Approx(0.5));

  // Zero prefix sum retains the previous leader.
  LossSequence lin;
  lin.push_back(LossFn::linear(Vec{1.0}));
  lin.push_back(LossFn::linear(Vec{-1.0}));
  const auto lin_leaders = leader_sequence(lin, dom);
  CHECK(lin_leaders[0][0] == doctest::Approx(-1.0));
  CHECK(lin_leaders[1][0] == doctest::Approx(-1.0));

  SplitRng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    LossSequence seq;
    const std::size_t T = 1 + rng.next_u64() % 10;
    for (std::size_t t = 0; t < T; ++t) {
      seq.push_back(LossFn::iso_quadratic(1.0, random_point(rng, 1, 1.0), 3.0));
    }
    const auto ls = leader_sequence(seq, dom);
    REQUIRE(ls.size() == T);
    CHECK(max_abs_diff(ls.back(), offline_optimum(seq, dom).w_star) <= 1e-9);
  }
}

TEST_CASE("follow-the-leader is dominated by the final leader") {
  SplitRng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + rng.next_u64() % 3;
    const std::size_t T = 1 + rng.next_u64() % 20;
    const Domain dom = Domain::box(Vec(d, -1.0), Vec(d, 1.0));
    LossSequence seq;
    for (std::size_t t = 0; t < T; ++t) {
      seq.push_back(LossFn::iso_quadratic(1.0, random_point(rng, d, 1.0), 10.0));
    }
    const auto leaders = leader_sequence(seq, dom);
    double played = 0.0, final_leader = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      played += seq[t].eval(leaders[t]);
      final_leader += seq[t].eval(leaders.back());
    }
    CHECK(played <= final_leader + 1e-9);
  }
}

TEST_CASE("final leader loss exceeds the leader path by at most the harmonic bound") {
  SplitRng rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t T = 1 + rng.next_u64() % 20;
    const Domain dom = Domain::box(Vec{-1.0}, Vec{1.0});
    LossSequence seq;
    for (std::size_t t = 0; t < T; ++t) {
      // Centers in [-1/2, 1/2] keep the losses 1-Lipschitz along leader paths.
      seq.push_back(LossFn::iso_quadratic(1.0, Vec{rng.uniform(-0.5, 0.5)}, 1.0));
    }
    const auto leaders = leader_sequence(seq, dom);
    double at_final = 0.0, on_path = 0.0, harmonic = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      at_final += seq[t].eval(leaders.back());
      on_path += seq[t].eval(leaders[t]);
      harmonic += 1.0 / static_cast<double>(t + 1);
    }
    CHECK(at_final - on_path <= 2.0 * harmonic + 1e-9);
  }
}

TEST_CASE("sequence summaries and validation") {
  LossSequence seq;
  seq.push_back(LossFn::linear(Vec{3.0, 4.0}));
  seq.push_back(LossFn::iso_quadratic(0.5, Vec{0.0, 0.0}, 2.0));
  CHECK(seq.max_lipschitz() == doctest::Approx(5.0));
  CHECK(seq.min_strong_convexity() == doctest::Approx(0.0));
  CHECK(seq.dimension() == 2);
  CHECK_THROWS_AS(seq.push_back(LossFn::linear(Vec{1.0})), std::invalid_argument);
}

TEST_CASE("text round trip") {
  LossSequence seq;
  seq.push_back(LossFn::linear(Vec{1.0, -0.25}));
  seq.push_back(LossFn::iso_quadratic(1.5, Vec{0.125, 0.5}, 4.0));
  std::stringstream ss;
  seq.save(ss);
  const LossSequence back = LossSequence::load(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].form() == LossForm::kLinear);
  CHECK(bit_equal(back[0].linear_gradient(), seq[0].linear_gradient()));
  CHECK(back[1].form() == LossForm::kIsoQuadratic);
  CHECK(back[1].strong_convexity() == seq[1].strong_convexity());
  CHECK(back[1].lipschitz() == seq[1].lipschitz());
  CHECK(bit_equal(back[1].quad_center(), seq[1].quad_center()));
}

TEST_CASE("lipschitz spot check") {
  SplitRng rng(53);
  const Domain dom = Domain::box(Vec{-1.0}, Vec{1.0});
  const LossFn honest = LossFn::custom(
      [](const Vec& w) { return 0.5 * w[0] * w[0]; },
      [](const Vec& w) { return Vec{w[0]}; }, 1, 1.0, 1.0);
  CHECK(lipschitz_spot_check(honest, dom, rng));
  const LossFn understated = LossFn::custom(
      [](const Vec& w) { return 5.0 * w[0]; },
      [](const Vec&) { return Vec{5.0}; }, 1, 1.0, 0.0);
  CHECK_FALSE(lipschitz_spot_check(understated, dom, rng));
}
