#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "lazyoco/geometry.hpp"
#include "lazyoco/rng.hpp"
#include "lazyoco/vec.hpp"

namespace lazyoco {

enum class LossForm { kLinear, kIsoQuadratic, kCustom };

// A convex loss with subgradient access and declared Lipschitz /
// strong-convexity metadata. Values are immutable; custom oracles must be
// safe for concurrent read-only invocation.
class LossFn {
 public:
  using EvalFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  // f(w) = g'w. Lipschitz bound is ||g||, strong convexity 0.
  static LossFn linear(Vec g);

  // f(w) = (lambda/2)||w - center||^2 with caller-declared Lipschitz bound.
  static LossFn iso_quadratic(double lambda, Vec center, double lipschitz);

  // Same, with G = lambda * (D + dist(center, W)) for the given domain.
  static LossFn iso_quadratic_on(double lambda, Vec center, const Domain& domain);

  static LossFn custom(EvalFn eval, GradFn grad, std::size_t dim,
                       double lipschitz, double strong_convexity);

  double eval(const Vec& w) const;
  Vec gradient(const Vec& w) const;

  LossForm form() const { return form_; }
  std::size_t dimension() const { return dim_; }
  double lipschitz() const { return lipschitz_; }
  double strong_convexity() const { return strong_convexity_; }

  const Vec& linear_gradient() const { return g_; }
  const Vec& quad_center() const { return g_; }

 private:
  LossFn() = default;

  LossForm form_ = LossForm::kLinear;
  std::size_t dim_ = 0;
  double lipschitz_ = 0.0;
  double strong_convexity_ = 0.0;
  Vec g_;  // Linear gradient or IsoQuadratic center
  EvalFn eval_;
  GradFn grad_;
};

// Nonempty, uniform-dimension sequence of losses.
class LossSequence {
 public:
  LossSequence() = default;
  explicit LossSequence(std::vector<LossFn> losses);

  void push_back(LossFn f);

  std::size_t size() const { return losses_.size(); }
  bool empty() const { return losses_.empty(); }
  const LossFn& operator[](std::size_t i) const { return losses_[i]; }
  std::size_t dimension() const;

  double max_lipschitz() const;
  double min_strong_convexity() const;

  // Line-oriented text format, one loss per line:
  //   linear <g_1> ... <g_d>
  //   isoquad <lambda> <lipschitz> <c_1> ... <c_d>
  // Custom losses are not serializable.
  void save(std::ostream& out) const;
  static LossSequence load(std::istream& in);

 private:
  std::vector<LossFn> losses_;
};

struct OfflineOptimum {
  Vec w_star;
  double value;
};

// Best fixed decision in hindsight and its cumulative loss.
OfflineOptimum offline_optimum(const LossSequence& seq, const Domain& domain);

// Per-prefix minimizers w_1*, ..., w_T*. When a Linear prefix gradient sum is
// identically zero the previous prefix's leader is retained.
std::vector<Vec> leader_sequence(const LossSequence& seq, const Domain& domain);

// Spot-check of a declared Lipschitz bound on sampled domain points.
// Returns false (a warning condition, not an error) if a gradient norm
// exceeds the declared bound.
bool lipschitz_spot_check(const LossFn& f, const Domain& domain, SplitRng& rng,
                          int num_points = 64);

// Projected gradient descent with Armijo backtracking; shared by the
// iterative offline optimum and objective argmin paths. Stops when the
// unit-step gradient mapping norm falls below tol.
Vec projected_gradient_descent(const std::function<double(const Vec&)>& value,
                               const std::function<Vec(const Vec&)>& grad,
                               const Domain& domain, Vec start, double tol,
                               std::size_t max_iters);

}  // namespace lazyoco
