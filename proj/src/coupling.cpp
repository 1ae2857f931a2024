#include "lazyoco/coupling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lazyoco {

namespace {

constexpr std::uint64_t kLoopCap = 10000000;  // density-inconsistency guard

double simpson(const std::function<double(double)>& f, double a, double m, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, lm, m, fa, flm, fm);
  const double right = simpson(f, m, rm, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson(f, a, m, b, fa, fm, fb), tol, 48);
}

}  // namespace

double normal_cdf(double x) {
  return 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
}

GaussianSpec::GaussianSpec(Vec m, double s) : mean(std::move(m)), std(s) {
  if (mean.empty()) throw std::invalid_argument("GaussianSpec: empty mean");
  if (!(s > 0.0)) throw std::invalid_argument("GaussianSpec: std must be positive");
}

double GaussianSpec::density(const Vec& x) const {
  check_dimension(x, mean.size(), "GaussianSpec::density");
  double q = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double d = x[i] - mean[i];
    q += d * d;
  }
  const double d = static_cast<double>(mean.size());
  return std::pow(2.0 * std::numbers::pi * std * std, -0.5 * d) *
         std::exp(-q / (2.0 * std * std));
}

Vec GaussianSpec::sample(SplitRng& rng) const {
  return rng.normal_vec(mean, std);
}

DensityDist GaussianSpec::as_dist() const {
  GaussianSpec self = *this;
  return DensityDist{
      [self](const Vec& x) { return self.density(x); },
      [self](SplitRng& rng) { return self.sample(rng); },
      mean.size(),
  };
}

CoupledSample lazy_sample(const Vec& x, const DensityDist& Q, const DensityDist& P,
                          SplitRng& rng) {
  if (Q.dimension != P.dimension) {
    throw std::invalid_argument("lazy_sample: distribution dimension mismatch");
  }
  check_dimension(x, Q.dimension, "lazy_sample");
  const double qx = Q.density(x);
  if (!(qx > 0.0)) {
    throw std::invalid_argument("lazy_sample: Q density of x is zero; x cannot be a Q-draw");
  }
  const double z = rng.uniform(0.0, qx);
  if (P.density(x) > z) {
    return CoupledSample{x, false, 0};
  }
  for (std::uint64_t it = 1; it <= kLoopCap; ++it) {
    Vec y = P.sample(rng);
    const double zp = rng.uniform(0.0, P.density(y));
    if (zp > Q.density(y)) {
      return CoupledSample{std::move(y), true, it};
    }
  }
  throw std::runtime_error("lazy_sample: rejection loop cap reached; density oracles are inconsistent");
}

double kl_gaussian(const GaussianSpec& a, const GaussianSpec& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("kl_gaussian: dimension mismatch");
  }
  if (a.std != b.std) {
    throw std::invalid_argument("kl_gaussian: only the equal-variance case is supported");
  }
  double q = 0.0;
  for (std::size_t i = 0; i < a.mean.size(); ++i) {
    const double d = a.mean[i] - b.mean[i];
    q += d * d;
  }
  return q / (2.0 * a.std * a.std);
}

double tv_upper_pinsker(const GaussianSpec& a, const GaussianSpec& b) {
  return std::sqrt(0.5 * kl_gaussian(a, b));
}

double tv_gaussian_1d(const GaussianSpec& a, const GaussianSpec& b) {
  if (a.dimension() != 1 || b.dimension() != 1) {
    throw std::invalid_argument("tv_gaussian_1d: requires d = 1");
  }
  if (a.std == b.std) {
    const double delta = std::fabs(a.mean[0] - b.mean[0]);
    return 2.0 * normal_cdf(delta / (2.0 * a.std)) - 1.0;
  }
  const double smax = std::max(a.std, b.std);
  const double lo = std::min(a.mean[0], b.mean[0]) - 12.0 * smax;
  const double hi = std::max(a.mean[0], b.mean[0]) + 12.0 * smax;
  auto absdiff = [&](double x) {
    const Vec v{x};
    return std::fabs(a.density(v) - b.density(v));
  };
  return 0.5 * integrate(absdiff, lo, hi, 1e-8);
}

double tv_discrete(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size() || p.empty()) {
    throw std::invalid_argument("tv_discrete: supports must be nonempty and of equal size");
  }
  double sp = 0.0, sq = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
    l1 += std::fabs(p[i] - q[i]);
  }
  if (std::fabs(sp - 1.0) > 1e-12 || std::fabs(sq - 1.0) > 1e-12) {
    throw std::invalid_argument("tv_discrete: inputs must sum to 1");
  }
  return 0.5 * l1;
}

}  // namespace lazyoco
