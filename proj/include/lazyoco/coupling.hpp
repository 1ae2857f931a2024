#pragma once

#include <cstdint>
#include <functional>

#include "lazyoco/rng.hpp"
#include "lazyoco/vec.hpp"

namespace lazyoco {

// Oracle access to a probability density and its sampler.
struct DensityDist {
  std::function<double(const Vec&)> density;
  std::function<Vec(SplitRng&)> sample;
  std::size_t dimension = 0;
};

// Isotropic Gaussian N(mean, std^2 I).
struct GaussianSpec {
  Vec mean;
  double std = 1.0;

  GaussianSpec(Vec m, double s);

  std::size_t dimension() const { return mean.size(); }
  double density(const Vec& x) const;
  Vec sample(SplitRng& rng) const;
  DensityDist as_dist() const;
};

struct CoupledSample {
  Vec value;
  bool resampled = false;          // true iff the rejection loop was entered
  std::uint64_t loop_iterations = 0;
};

// Maximal-coupling sampler. Given x drawn from Q, returns a value whose
// marginal law is P; the input x is kept (bit-for-bit) with probability
// 1 - ||Q - P||_TV.
CoupledSample lazy_sample(const Vec& x, const DensityDist& Q, const DensityDist& P,
                          SplitRng& rng);

// KL divergence between equal-variance isotropic Gaussians:
// ||mu1 - mu2||^2 / (2 sigma^2).
double kl_gaussian(const GaussianSpec& a, const GaussianSpec& b);

// Pinsker upper bound sqrt(KL/2) = ||mu1 - mu2|| / (2 sigma).
double tv_upper_pinsker(const GaussianSpec& a, const GaussianSpec& b);

// Exact total variation between 1-D Gaussians. Equal-std pairs use the
// closed form 2*Phi(delta / 2 sigma) - 1; unequal-std pairs integrate the
// absolute density difference by adaptive quadrature (1e-8 absolute).
double tv_gaussian_1d(const GaussianSpec& a, const GaussianSpec& b);

// Half L1 distance between two probability vectors of equal support size.
double tv_discrete(const std::vector<double>& p, const std::vector<double>& q);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace lazyoco
