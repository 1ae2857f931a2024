#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "lazyoco/coupling.hpp"
#include "lazyoco/geometry.hpp"
#include "lazyoco/losses.hpp"
#include "lazyoco/rng.hpp"

namespace lazyoco {

// Per-round perturbation standard deviation sigma_t; nondecreasing in t.
struct PerturbationSchedule {
  enum class Kind { kConstant, kSqrtScaled };

  static PerturbationSchedule constant(double sigma);
  static PerturbationSchedule sqrt_scaled(double sigma);

  double at(std::size_t t) const;  // t >= 1

  Kind kind = Kind::kConstant;
  double sigma = 1.0;
};

// R(w) = ||w - anchor||^2 / (2 eta), or identically zero.
struct Regularizer {
  enum class Kind { kNone, kQuadratic };

  static Regularizer none();
  static Regularizer quadratic(double eta, Vec anchor);

  double eval(const Vec& w) const;
  void add_gradient(const Vec& w, Vec& out) const;

  Kind kind = Kind::kNone;
  double eta = 0.0;
  Vec anchor;
};

// Sufficient statistics for phi_t(w) = sum_i f_i(w) + p'w + R(w).
// Linear losses fold into a gradient sum, shared-lambda isotropic quadratics
// into a center sum; anything else is retained for the iterative solver.
class CumulativeObjective {
 public:
  CumulativeObjective(std::size_t dim, Regularizer reg);

  void add(const LossFn& f);
  void set_perturbation(Vec p);
  const Vec& perturbation() const { return perturbation_; }

  std::size_t loss_count() const { return count_; }
  double modulus() const;  // total strong convexity, regularizer included
  double eval(const Vec& w) const;
  Vec gradient(const Vec& w) const;

  // Unique constrained minimizer over the domain; closed form whenever only
  // linear and shared-lambda quadratic statistics are present.
  Vec argmin(const Domain& domain) const;

 private:
  std::size_t dim_;
  Regularizer reg_;
  Vec perturbation_;
  Vec grad_sum_;
  double iso_lambda_ = 0.0;
  Vec iso_center_sum_;
  double iso_center_sq_sum_ = 0.0;
  std::size_t iso_count_ = 0;
  double lambda_sum_ = 0.0;
  std::size_t count_ = 0;
  std::vector<LossFn> retained_;
};

// Uniform online-player interface: decision() is the commitment for the
// current round; advance() folds the observed loss and moves to the next
// round, reporting whether the published decision changed.
class Player {
 public:
  virtual ~Player() = default;
  virtual const Vec& decision() const = 0;
  virtual bool advance(const LossFn& f, SplitRng& rng) = 0;
  // Whether the round-1 decision commit counts toward S_T (block-publishing
  // algorithms count it; step-based ones do not).
  virtual bool first_commit_counts() const { return false; }
};

// Follow-the-Perturbed-Regularized-Lazy-Leader. Switches are detected by
// the coupling's resample flag, never by numeric decision comparison.
class FtprllPlayer : public Player {
 public:
  FtprllPlayer(Domain domain, PerturbationSchedule schedule, Regularizer reg,
               SplitRng& rng, double max_lipschitz = 0.0);

  const Vec& decision() const override { return w_; }
  bool advance(const LossFn& f, SplitRng& rng) override;

  std::size_t round() const { return t_; }
  const CumulativeObjective& objective() const { return obj_; }

 private:
  Domain domain_;
  PerturbationSchedule schedule_;
  CumulativeObjective obj_;
  Vec w_;
  std::size_t t_ = 1;
  double max_lipschitz_;
};

// Lazy SGD: inner projected-OGD iterate, decisions republished at rounds
// t = 1, 2, 4, 8, ...
class LazySgdPlayer : public Player {
 public:
  using StepRule = std::function<double(std::size_t)>;

  LazySgdPlayer(Domain domain, StepRule eta);

  static StepRule general_step(double diameter, double lipschitz);
  static StepRule strongly_convex_step(double lambda);

  const Vec& decision() const override { return w_; }
  bool advance(const LossFn& f, SplitRng& rng) override;
  bool first_commit_counts() const override { return true; }

  std::size_t block_index() const { return k_; }

 private:
  Domain domain_;
  StepRule eta_;
  Vec x_, sum_, w_;
  std::size_t t_ = 1;
  std::size_t k_ = 1;
};

// Plain projected online gradient descent.
class OgdPlayer : public Player {
 public:
  using StepRule = LazySgdPlayer::StepRule;

  OgdPlayer(Domain domain, StepRule eta);

  const Vec& decision() const override { return w_; }
  bool advance(const LossFn& f, SplitRng& rng) override;

 private:
  Domain domain_;
  StepRule eta_;
  Vec w_;
  std::size_t t_ = 1;
};

// Blocking baseline: one decision per ceil(T/S)-round block, updated at
// block ends with the block-aggregated gradient, step sizes tuned for an
// S-round game with Lipschitz constant (T/S) G.
class BlockedOgdPlayer : public Player {
 public:
  BlockedOgdPlayer(Domain domain, std::size_t horizon, std::size_t max_switches,
                   double lipschitz, double lambda);

  const Vec& decision() const override { return w_; }
  bool advance(const LossFn& f, SplitRng& rng) override;

 private:
  Domain domain_;
  std::size_t block_len_;
  double eff_lipschitz_;
  double eff_lambda_;
  Vec w_, grad_acc_;
  std::size_t t_ = 1;
  std::size_t block_ = 0;
};

}  // namespace lazyoco
