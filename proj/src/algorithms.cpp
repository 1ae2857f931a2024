#include "lazyoco/algorithms.hpp"

#include <cmath>
#include <stdexcept>

namespace lazyoco {

PerturbationSchedule PerturbationSchedule::constant(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("PerturbationSchedule: sigma must be positive");
  return {Kind::kConstant, sigma};
}

PerturbationSchedule PerturbationSchedule::sqrt_scaled(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("PerturbationSchedule: sigma must be positive");
  return {Kind::kSqrtScaled, sigma};
}

double PerturbationSchedule::at(std::size_t t) const {
  if (t == 0) throw std::invalid_argument("PerturbationSchedule::at: rounds start at 1");
  return kind == Kind::kConstant ? sigma : std::sqrt(static_cast<double>(t)) * sigma;
}

Regularizer Regularizer::none() { return Regularizer{}; }

Regularizer Regularizer::quadratic(double eta, Vec anchor) {
  if (!(eta > 0.0)) throw std::invalid_argument("Regularizer: eta must be positive");
  Regularizer r;
  r.kind = Kind::kQuadratic;
  r.eta = eta;
  r.anchor = std::move(anchor);
  return r;
}

double Regularizer::eval(const Vec& w) const {
  if (kind == Kind::kNone) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = w[i] - anchor[i];
    s += d * d;
  }
  return s / (2.0 * eta);
}

void Regularizer::add_gradient(const Vec& w, Vec& out) const {
  if (kind == Kind::kNone) return;
  for (std::size_t i = 0; i < w.size(); ++i) out[i] += (w[i] - anchor[i]) / eta;
}

CumulativeObjective::CumulativeObjective(std::size_t dim, Regularizer reg)
    : dim_(dim), reg_(std::move(reg)), perturbation_(zeros(dim)),
      grad_sum_(zeros(dim)), iso_center_sum_(zeros(dim)) {
  if (reg_.kind == Regularizer::Kind::kQuadratic) {
    check_dimension(reg_.anchor, dim_, "CumulativeObjective: regularizer anchor");
  }
}

void CumulativeObjective::add(const LossFn& f) {
  if (f.dimension() != dim_) {
    throw std::invalid_argument("CumulativeObjective::add: dimension mismatch");
  }
  switch (f.form()) {
    case LossForm::kLinear:
      axpy(1.0, f.linear_gradient(), grad_sum_);
      break;
    case LossForm::kIsoQuadratic:
      if (iso_count_ == 0 || f.strong_convexity() == iso_lambda_) {
        iso_lambda_ = f.strong_convexity();
        axpy(1.0, f.quad_center(), iso_center_sum_);
        iso_center_sq_sum_ += norm2_sq(f.quad_center());
        ++iso_count_;
      } else {
        retained_.push_back(f);
      }
      break;
    case LossForm::kCustom:
      retained_.push_back(f);
      break;
  }
  lambda_sum_ += f.strong_convexity();
  ++count_;
}

void CumulativeObjective::set_perturbation(Vec p) {
  check_dimension(p, dim_, "CumulativeObjective::set_perturbation");
  perturbation_ = std::move(p);
}

double CumulativeObjective::modulus() const {
  return lambda_sum_ + (reg_.kind == Regularizer::Kind::kQuadratic ? 1.0 / reg_.eta : 0.0);
}

double CumulativeObjective::eval(const Vec& w) const {
  check_dimension(w, dim_, "CumulativeObjective::eval");
  double v = dot(grad_sum_, w) + dot(perturbation_, w) + reg_.eval(w);
  if (iso_count_ > 0) {
    v += 0.5 * iso_lambda_ *
         (static_cast<double>(iso_count_) * norm2_sq(w) - 2.0 * dot(iso_center_sum_, w) +
          iso_center_sq_sum_);
  }
  for (const auto& f : retained_) v += f.eval(w);
  return v;
}

Vec CumulativeObjective::gradient(const Vec& w) const {
  check_dimension(w, dim_, "CumulativeObjective::gradient");
  Vec g = grad_sum_;
  axpy(1.0, perturbation_, g);
  if (iso_count_ > 0) {
    for (std::size_t i = 0; i < dim_; ++i) {
      g[i] += iso_lambda_ * (static_cast<double>(iso_count_) * w[i] - iso_center_sum_[i]);
    }
  }
  for (const auto& f : retained_) axpy(1.0, f.gradient(w), g);
  reg_.add_gradient(w, g);
  return g;
}

Vec CumulativeObjective::argmin(const Domain& domain) const {
  if (domain.dimension() != dim_) {
    throw std::invalid_argument("CumulativeObjective::argmin: dimension mismatch");
  }
  const double mod = modulus();
  if (!(mod > 0.0)) {
    throw std::logic_error("CumulativeObjective::argmin: objective is not strongly convex");
  }
  if (retained_.empty()) {
    // phi(w) = (a/2)||w||^2 - b'w + const; the quadratic part is isotropic,
    // so the constrained argmin is the projection of b/a.
    double a = iso_lambda_ * static_cast<double>(iso_count_);
    Vec b = scale(grad_sum_, -1.0);
    axpy(-1.0, perturbation_, b);
    axpy(iso_lambda_, iso_center_sum_, b);
    if (reg_.kind == Regularizer::Kind::kQuadratic) {
      a += 1.0 / reg_.eta;
      axpy(1.0 / reg_.eta, reg_.anchor, b);
    }
    if (!(a > 0.0)) {
      throw std::logic_error("CumulativeObjective::argmin: no quadratic part");
    }
    return domain.project(scale(std::move(b), 1.0 / a));
  }
  return projected_gradient_descent(
      [this](const Vec& w) { return eval(w); },
      [this](const Vec& w) { return gradient(w); },
      domain, domain.project(zeros(dim_)), 1e-9, 100000);
}

FtprllPlayer::FtprllPlayer(Domain domain, PerturbationSchedule schedule, Regularizer reg,
                           SplitRng& rng, double max_lipschitz)
    : domain_(std::move(domain)),
      schedule_(schedule),
      obj_(domain_.dimension(), std::move(reg)),
      max_lipschitz_(max_lipschitz) {
  const Vec p1 = rng.normal_vec(zeros(domain_.dimension()), schedule_.at(1));
  obj_.set_perturbation(p1);
  if (obj_.modulus() > 0.0) {
    w_ = obj_.argmin(domain_);
  } else {
    // Round-1 objective p1'w has no curvature; take the deterministic
    // boundary minimizer, with p1 = 0 mapping to the domain center.
    w_ = domain_.linear_minimizer(p1, domain_.center());
  }
}

bool FtprllPlayer::advance(const LossFn& f, SplitRng& rng) {
  if (f.dimension() != domain_.dimension()) {
    throw std::invalid_argument("FtprllPlayer::advance: dimension mismatch");
  }
  if (max_lipschitz_ > 0.0 && f.lipschitz() > max_lipschitz_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("FtprllPlayer::advance: loss exceeds configured Lipschitz bound");
  }
  if (t_ == 1 && schedule_.kind == PerturbationSchedule::Kind::kSqrtScaled &&
      obj_.modulus() == 0.0 && f.strong_convexity() == 0.0) {
    throw std::invalid_argument(
        "FtprllPlayer::advance: sqrt-scaled schedule without regularizer requires strongly convex losses");
  }
  const Vec g = f.gradient(w_);
  Vec shifted = obj_.perturbation();
  axpy(-1.0, g, shifted);
  const GaussianSpec q(scale(g, -1.0), schedule_.at(t_));
  const GaussianSpec p(zeros(domain_.dimension()), schedule_.at(t_ + 1));
  CoupledSample cs = lazy_sample(shifted, q.as_dist(), p.as_dist(), rng);
  obj_.add(f);
  ++t_;
  obj_.set_perturbation(std::move(cs.value));
  if (!cs.resampled) {
    // Coupling kept the shifted perturbation: w_t is also the unique
    // minimizer of the updated objective, so the decision is reused as is.
    return false;
  }
  w_ = obj_.argmin(domain_);
  return true;
}

LazySgdPlayer::LazySgdPlayer(Domain domain, StepRule eta)
    : domain_(std::move(domain)), eta_(std::move(eta)) {
  x_ = domain_.project(domain_.center());
  sum_ = x_;
  w_ = domain_.project(sum_);
}

LazySgdPlayer::StepRule LazySgdPlayer::general_step(double diameter, double lipschitz) {
  return [diameter, lipschitz](std::size_t t) {
    return diameter / (lipschitz * std::sqrt(static_cast<double>(t)));
  };
}

LazySgdPlayer::StepRule LazySgdPlayer::strongly_convex_step(double lambda) {
  return [lambda](std::size_t t) { return 1.0 / (lambda * static_cast<double>(t)); };
}

bool LazySgdPlayer::advance(const LossFn& f, SplitRng&) {
  const double eta = eta_(t_);
  if (!(eta > 0.0)) throw std::invalid_argument("LazySgdPlayer::advance: step size must be positive");
  Vec g = f.gradient(x_);
  axpy(-eta, g, x_);
  x_ = domain_.project(x_);
  ++t_;
  axpy(1.0, x_, sum_);
  if ((t_ & (t_ - 1)) == 0) {  // t is a power of two: republish
    ++k_;
    w_ = domain_.project(scale(sum_, 1.0 / static_cast<double>(t_)));
    return true;
  }
  return false;
}

OgdPlayer::OgdPlayer(Domain domain, StepRule eta)
    : domain_(std::move(domain)), eta_(std::move(eta)) {
  w_ = domain_.project(domain_.center());
}

bool OgdPlayer::advance(const LossFn& f, SplitRng&) {
  const double eta = eta_(t_);
  if (!(eta > 0.0)) throw std::invalid_argument("OgdPlayer::advance: step size must be positive");
  Vec next = w_;
  axpy(-eta, f.gradient(w_), next);
  next = domain_.project(next);
  ++t_;
  const bool switched = max_abs_diff(next, w_) > 1e-12;
  w_ = std::move(next);
  return switched;
}

BlockedOgdPlayer::BlockedOgdPlayer(Domain domain, std::size_t horizon,
                                   std::size_t max_switches, double lipschitz,
                                   double lambda)
    : domain_(std::move(domain)) {
  if (horizon == 0 || max_switches == 0) {
    throw std::invalid_argument("BlockedOgdPlayer: horizon and switch budget must be positive");
  }
  block_len_ = (horizon + max_switches - 1) / max_switches;
  const double ratio = static_cast<double>(horizon) / static_cast<double>(max_switches);
  eff_lipschitz_ = ratio * lipschitz;
  eff_lambda_ = ratio * lambda;
  w_ = domain_.project(domain_.center());
  grad_acc_ = zeros(domain_.dimension());
}

bool BlockedOgdPlayer::advance(const LossFn& f, SplitRng&) {
  axpy(1.0, f.gradient(w_), grad_acc_);
  const bool block_end = (t_ % block_len_ == 0);
  ++t_;
  if (!block_end) return false;
  ++block_;
  const double k = static_cast<double>(block_);
  const double eta = eff_lambda_ > 0.0
                         ? 1.0 / (eff_lambda_ * k)
                         : domain_.diameter() / (eff_lipschitz_ * std::sqrt(k));
  Vec next = w_;
  axpy(-eta, grad_acc_, next);
  next = domain_.project(next);
  grad_acc_ = zeros(domain_.dimension());
  const bool switched = max_abs_diff(next, w_) > 1e-12;
  w_ = std::move(next);
  return switched;
}

}  // namespace lazyoco
