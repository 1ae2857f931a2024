#include "lazyoco/adversaries.hpp"

#include <stdexcept>

namespace lazyoco {

IidAdversary::IidAdversary(Sampler sampler) : sampler_(std::move(sampler)) {
  if (!sampler_) throw std::invalid_argument("IidAdversary: null sampler");
}

IidAdversary::Sampler IidAdversary::rademacher_linear(std::size_t dim) {
  return bernoulli_linear(dim, 0.5);
}

IidAdversary::Sampler IidAdversary::bernoulli_linear(std::size_t dim, double p) {
  if (dim == 0) throw std::invalid_argument("bernoulli_linear: dim must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli_linear: p outside [0, 1]");
  return [dim, p](SplitRng& rng) {
    Vec g(dim);
    for (double& v : g) v = rng.bernoulli(p) ? 1.0 : -1.0;
    return LossFn::linear(std::move(g));
  };
}

IidAdversary::Sampler IidAdversary::iso_quadratic_uniform(double lambda, double lo,
                                                          double hi, const Domain& domain) {
  if (!(lambda > 0.0)) throw std::invalid_argument("iso_quadratic_uniform: lambda must be positive");
  if (!(lo < hi)) throw std::invalid_argument("iso_quadratic_uniform: empty center range");
  return [lambda, lo, hi, domain](SplitRng& rng) {
    Vec c(domain.dimension());
    for (double& v : c) v = rng.uniform(lo, hi);
    return LossFn::iso_quadratic_on(lambda, std::move(c), domain);
  };
}

LossFn IidAdversary::next_loss(std::size_t, const Vec*, SplitRng& rng) {
  return sampler_(rng);
}

ReplayAdversary::ReplayAdversary(LossSequence seq) : seq_(std::move(seq)) {
  if (seq_.empty()) throw std::invalid_argument("ReplayAdversary: empty sequence");
}

LossFn ReplayAdversary::next_loss(std::size_t, const Vec*, SplitRng&) {
  if (next_ >= seq_.size()) {
    throw std::runtime_error("ReplayAdversary: sequence exhausted");
  }
  return seq_[next_++];
}

SectionedParams sectioned_params(std::size_t S, std::size_t C, std::size_t T) {
  if (S < 1 || C < 1) throw std::invalid_argument("sectioned_params: S and C must be >= 1");
  const std::size_t J = C * C * S * S;
  if (T < J) throw std::invalid_argument("sectioned_params: T must be at least C^2 S^2");
  const double eps = 1.0 / (8.0 * static_cast<double>(C) * static_cast<double>(S));
  return SectionedParams{J, T / J, eps, 0.5 * (1.0 + eps), 0.5 * (1.0 - eps)};
}

SectionedBernoulliAdversary::SectionedBernoulliAdversary(double p, std::size_t S,
                                                         std::size_t C, std::size_t T)
    : params_(sectioned_params(S, C, T)), horizon_(T), p_(p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("SectionedBernoulliAdversary: p outside (0, 1)");
  }
}

LossFn SectionedBernoulliAdversary::next_loss(std::size_t t, const Vec*, SplitRng& rng) {
  if (t < 1 || t > horizon_) {
    throw std::invalid_argument("SectionedBernoulliAdversary: round outside horizon");
  }
  // Remainder rounds past J * tau belong to the final section.
  std::size_t j = (t - 1) / params_.section_len + 1;
  if (j > params_.sections) j = params_.sections;
  if (j != current_section_) {
    if (j != current_section_ + 1) {
      throw std::logic_error("SectionedBernoulliAdversary: rounds must be queried in order");
    }
    current_section_ = j;
    b_ = rng.bernoulli(p_) ? 1.0 : -1.0;
  }
  return LossFn::linear(Vec{b_});
}

AdaptivePusherAdversary::AdaptivePusherAdversary(std::size_t horizon)
    : horizon_(horizon), warmup_((horizon + 1) / 2) {
  if (horizon == 0) throw std::invalid_argument("AdaptivePusherAdversary: horizon must be positive");
}

LossFn AdaptivePusherAdversary::next_loss(std::size_t t, const Vec* last_decision, SplitRng&) {
  if (last_decision == nullptr) {
    throw std::invalid_argument("AdaptivePusherAdversary: requires the committed decision");
  }
  if (last_decision->size() != 1) {
    throw std::invalid_argument("AdaptivePusherAdversary: operates on d = 1");
  }
  if (t < 1 || t > horizon_) {
    throw std::invalid_argument("AdaptivePusherAdversary: round outside horizon");
  }
  double center = leader_;
  if (t > warmup_) {
    const double offset = static_cast<double>(t) / (2.0 * static_cast<double>(horizon_));
    const double sign = ((*last_decision)[0] <= leader_) ? 1.0 : -1.0;
    center = leader_ + sign * offset;
    leader_ += sign / (2.0 * static_cast<double>(horizon_));
  }
  return LossFn::iso_quadratic(kLambda, Vec{center}, kDeclaredLipschitz);
}

}  // namespace lazyoco
