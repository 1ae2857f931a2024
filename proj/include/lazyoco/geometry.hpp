#pragma once

#include <cstddef>

#include "lazyoco/vec.hpp"

namespace lazyoco {

// Convex feasible set with exact Euclidean projection. Immutable after
// construction; safe to share across concurrent game runs.
class Domain {
 public:
  enum class Kind { kBox, kBall };

  static Domain box(Vec lower, Vec upper);
  static Domain ball(Vec center, double radius);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return dim_; }
  double diameter() const { return diameter_; }

  // Euclidean-nearest member of the set.
  Vec project(const Vec& x) const;

  // True iff x is within tol (Euclidean) of the set.
  bool contains(const Vec& x, double tol) const;

  // Box midpoint / ball center; default anchor point.
  Vec center() const;

  // Minimizer of g'w over the set. Coordinates (box) or directions (ball)
  // where g vanishes fall back to the projection of `tie`.
  Vec linear_minimizer(const Vec& g, const Vec& tie) const;

  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const Vec& ball_center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Domain() = default;

  Kind kind_ = Kind::kBox;
  std::size_t dim_ = 0;
  double diameter_ = 0.0;
  Vec lower_, upper_;   // box
  Vec center_;          // ball
  double radius_ = 0.0;
};

}  // namespace lazyoco
