#pragma once

#include <cstddef>
#include <functional>
#include <memory>

#include "lazyoco/geometry.hpp"
#include "lazyoco/losses.hpp"
#include "lazyoco/rng.hpp"

namespace lazyoco {

// Loss-sequence generator. Oblivious adversaries ignore last_decision;
// adaptive ones require it. Single-owner mutable, one instance per game run.
class Adversary {
 public:
  virtual ~Adversary() = default;
  // last_decision is the decision committed for round t (t >= 1), or null.
  virtual LossFn next_loss(std::size_t t, const Vec* last_decision, SplitRng& rng) = 0;
  virtual bool adaptive() const { return false; }
};

// Fresh i.i.d. loss each round.
class IidAdversary : public Adversary {
 public:
  using Sampler = std::function<LossFn(SplitRng&)>;

  explicit IidAdversary(Sampler sampler);

  // Linear losses with independent ±1 coordinates.
  static Sampler rademacher_linear(std::size_t dim);
  // Linear losses with coordinates +1 w.p. p, else -1.
  static Sampler bernoulli_linear(std::size_t dim, double p);
  // Isotropic quadratics with centers uniform in [lo, hi]^d; the Lipschitz
  // bound is taken over the given domain.
  static Sampler iso_quadratic_uniform(double lambda, double lo, double hi,
                                       const Domain& domain);

  LossFn next_loss(std::size_t t, const Vec* last_decision, SplitRng& rng) override;

 private:
  Sampler sampler_;
};

// Fixed oblivious sequence, played back in order.
class ReplayAdversary : public Adversary {
 public:
  explicit ReplayAdversary(LossSequence seq);

  LossFn next_loss(std::size_t t, const Vec* last_decision, SplitRng& rng) override;

 private:
  LossSequence seq_;
  std::size_t next_ = 0;
};

struct SectionedParams {
  std::size_t sections;      // J = C^2 S^2
  std::size_t section_len;   // tau = floor(T / J); remainder joins the last section
  double epsilon;            // 1 / (8 C S)
  double p_plus;             // (1 + epsilon) / 2
  double p_minus;            // (1 - epsilon) / 2
};

SectionedParams sectioned_params(std::size_t S, std::size_t C, std::size_t T);

// One-dimensional linear losses f_t(w) = b_j w, constant within each of J
// sections; b_j is +1 with probability p at each section start.
class SectionedBernoulliAdversary : public Adversary {
 public:
  SectionedBernoulliAdversary(double p, std::size_t S, std::size_t C, std::size_t T);

  const SectionedParams& params() const { return params_; }

  LossFn next_loss(std::size_t t, const Vec* last_decision, SplitRng& rng) override;

 private:
  SectionedParams params_;
  std::size_t horizon_;
  double p_;
  std::size_t current_section_ = 0;  // 1-based once started
  double b_ = 0.0;
};

// Adaptive one-dimensional quadratic adversary on [-1, 1]: after a warmup
// half of centered losses, each round pushes the loss center t/(2T) away
// from the side of the leader the player sits on, and nudges the leader
// 1/(2T) the same way. The leader stays in [-1/2, 1/2].
class AdaptivePusherAdversary : public Adversary {
 public:
  explicit AdaptivePusherAdversary(std::size_t horizon);

  // |grad| can reach 2 on [-1, 1] even though the centers stay inside it.
  static constexpr double kDeclaredLipschitz = 2.0;
  static constexpr double kLambda = 1.0;

  double leader() const { return leader_; }
  std::size_t warmup_rounds() const { return warmup_; }

  LossFn next_loss(std::size_t t, const Vec* last_decision, SplitRng& rng) override;
  bool adaptive() const override { return true; }

 private:
  std::size_t horizon_;
  std::size_t warmup_;
  double leader_ = 0.0;
};

}  // namespace lazyoco
