#include "lazyoco/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lazyoco {

Domain Domain::box(Vec lower, Vec upper) {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("Domain::box: bounds must be nonempty and of equal dimension");
  }
  double diam_sq = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument("Domain::box: lower must be strictly below upper");
    }
    const double w = upper[i] - lower[i];
    diam_sq += w * w;
  }
  Domain d;
  d.kind_ = Kind::kBox;
  d.dim_ = lower.size();
  d.diameter_ = std::sqrt(diam_sq);
  d.lower_ = std::move(lower);
  d.upper_ = std::move(upper);
  return d;
}

Domain Domain::ball(Vec center, double radius) {
  if (center.empty()) throw std::invalid_argument("Domain::ball: empty center");
  if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius must be positive");
  Domain d;
  d.kind_ = Kind::kBall;
  d.dim_ = center.size();
  d.diameter_ = 2.0 * radius;
  d.center_ = std::move(center);
  d.radius_ = radius;
  return d;
}

Vec Domain::project(const Vec& x) const {
  check_dimension(x, dim_, "Domain::project");
  if (kind_ == Kind::kBox) {
    Vec out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      out[i] = std::clamp(x[i], lower_[i], upper_[i]);
    }
    return out;
  }
  const double dist = dist2(x, center_);
  if (dist <= radius_) return x;
  Vec out(dim_);
  const double s = radius_ / dist;
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = center_[i] + s * (x[i] - center_[i]);
  }
  return out;
}

bool Domain::contains(const Vec& x, double tol) const {
  check_dimension(x, dim_, "Domain::contains");
  if (tol < 0.0) throw std::invalid_argument("Domain::contains: tol must be nonnegative");
  return dist2(x, project(x)) <= tol;
}

Vec Domain::center() const {
  if (kind_ == Kind::kBall) return center_;
  Vec out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = 0.5 * (lower_[i] + upper_[i]);
  return out;
}

Vec Domain::linear_minimizer(const Vec& g, const Vec& tie) const {
  check_dimension(g, dim_, "Domain::linear_minimizer");
  check_dimension(tie, dim_, "Domain::linear_minimizer");
  if (kind_ == Kind::kBox) {
    Vec out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (g[i] > 0.0) {
        out[i] = lower_[i];
      } else if (g[i] < 0.0) {
        out[i] = upper_[i];
      } else {
        out[i] = std::clamp(tie[i], lower_[i], upper_[i]);
      }
    }
    return out;
  }
  const double gn = norm2(g);
  if (gn == 0.0) return project(tie);
  Vec out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = center_[i] - radius_ * g[i] / gn;
  }
  return out;
}

}  // namespace lazyoco
