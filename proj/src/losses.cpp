#include "lazyoco/losses.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lazyoco {

LossFn LossFn::linear(Vec g) {
  if (g.empty()) throw std::invalid_argument("LossFn::linear: empty gradient");
  LossFn f;
  f.form_ = LossForm::kLinear;
  f.dim_ = g.size();
  f.lipschitz_ = norm2(g);
  f.strong_convexity_ = 0.0;
  f.g_ = std::move(g);
  return f;
}

LossFn LossFn::iso_quadratic(double lambda, Vec center, double lipschitz) {
  if (center.empty()) throw std::invalid_argument("LossFn::iso_quadratic: empty center");
  if (!(lambda > 0.0)) throw std::invalid_argument("LossFn::iso_quadratic: lambda must be positive");
  LossFn f;
  f.form_ = LossForm::kIsoQuadratic;
  f.dim_ = center.size();
  f.lipschitz_ = lipschitz;
  f.strong_convexity_ = lambda;
  f.g_ = std::move(center);
  return f;
}

LossFn LossFn::iso_quadratic_on(double lambda, Vec center, const Domain& domain) {
  check_dimension(center, domain.dimension(), "LossFn::iso_quadratic_on");
  const double off = dist2(center, domain.project(center));
  const double g = lambda * (domain.diameter() + off);
  return iso_quadratic(lambda, std::move(center), g);
}

LossFn LossFn::custom(EvalFn eval, GradFn grad, std::size_t dim,
                      double lipschitz, double strong_convexity) {
  if (!eval || !grad) throw std::invalid_argument("LossFn::custom: missing oracle");
  if (dim == 0) throw std::invalid_argument("LossFn::custom: zero dimension");
  LossFn f;
  f.form_ = LossForm::kCustom;
  f.dim_ = dim;
  f.lipschitz_ = lipschitz;
  f.strong_convexity_ = strong_convexity;
  f.eval_ = std::move(eval);
  f.grad_ = std::move(grad);
  return f;
}

double LossFn::eval(const Vec& w) const {
  check_dimension(w, dim_, "LossFn::eval");
  switch (form_) {
    case LossForm::kLinear:
      return dot(g_, w);
    case LossForm::kIsoQuadratic: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        const double d = w[i] - g_[i];
        s += d * d;
      }
      return 0.5 * strong_convexity_ * s;
    }
    case LossForm::kCustom:
      return eval_(w);
  }
  throw std::logic_error("LossFn::eval: unreachable");
}

Vec LossFn::gradient(const Vec& w) const {
  check_dimension(w, dim_, "LossFn::gradient");
  switch (form_) {
    case LossForm::kLinear:
      return g_;
    case LossForm::kIsoQuadratic: {
      Vec out(dim_);
      for (std::size_t i = 0; i < dim_; ++i) out[i] = strong_convexity_ * (w[i] - g_[i]);
      return out;
    }
    case LossForm::kCustom: {
      Vec out = grad_(w);
      check_dimension(out, dim_, "LossFn::gradient (custom oracle)");
      return out;
    }
  }
  throw std::logic_error("LossFn::gradient: unreachable");
}

LossSequence::LossSequence(std::vector<LossFn> losses) {
  for (auto& f : losses) push_back(std::move(f));
}

void LossSequence::push_back(LossFn f) {
  if (!losses_.empty() && f.dimension() != losses_.front().dimension()) {
    throw std::invalid_argument("LossSequence: dimension mismatch");
  }
  losses_.push_back(std::move(f));
}

std::size_t LossSequence::dimension() const {
  if (losses_.empty()) throw std::logic_error("LossSequence::dimension: empty sequence");
  return losses_.front().dimension();
}

double LossSequence::max_lipschitz() const {
  double g = 0.0;
  for (const auto& f : losses_) g = std::max(g, f.lipschitz());
  return g;
}

double LossSequence::min_strong_convexity() const {
  double l = std::numeric_limits<double>::infinity();
  for (const auto& f : losses_) l = std::min(l, f.strong_convexity());
  return losses_.empty() ? 0.0 : l;
}

void LossSequence::save(std::ostream& out) const {
  out.precision(17);
  for (const auto& f : losses_) {
    switch (f.form()) {
      case LossForm::kLinear:
        out << "linear";
        for (double g : f.linear_gradient()) out << ' ' << g;
        out << '\n';
        break;
      case LossForm::kIsoQuadratic:
        out << "isoquad " << f.strong_convexity() << ' ' << f.lipschitz();
        for (double c : f.quad_center()) out << ' ' << c;
        out << '\n';
        break;
      case LossForm::kCustom:
        throw std::invalid_argument("LossSequence::save: custom losses are not serializable");
    }
  }
}

LossSequence LossSequence::load(std::istream& in) {
  LossSequence seq;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto fail = [&](const char* msg) {
      throw std::invalid_argument("LossSequence::load: line " + std::to_string(lineno) + ": " + msg);
    };
    if (tag == "linear") {
      Vec g;
      double v;
      while (ls >> v) g.push_back(v);
      if (g.empty()) fail("linear loss needs at least one coefficient");
      seq.push_back(LossFn::linear(std::move(g)));
    } else if (tag == "isoquad") {
      double lambda, lip, v;
      if (!(ls >> lambda >> lip)) fail("isoquad loss needs lambda and lipschitz");
      Vec c;
      while (ls >> v) c.push_back(v);
      if (c.empty()) fail("isoquad loss needs a center");
      seq.push_back(LossFn::iso_quadratic(lambda, std::move(c), lip));
    } else {
      fail("unknown loss tag");
    }
  }
  if (seq.empty()) throw std::invalid_argument("LossSequence::load: empty sequence");
  return seq;
}

namespace {

enum class SeqShape { kAllLinear, kAllIsoQuadEqualLambda, kIterative };

SeqShape classify(const LossSequence& seq) {
  bool all_linear = true;
  bool all_isoquad = true;
  double lambda = -1.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& f = seq[i];
    if (f.form() != LossForm::kLinear) all_linear = false;
    if (f.form() != LossForm::kIsoQuadratic) {
      all_isoquad = false;
    } else if (lambda < 0.0) {
      lambda = f.strong_convexity();
    } else if (f.strong_convexity() != lambda) {
      all_isoquad = false;
    }
  }
  if (all_linear) return SeqShape::kAllLinear;
  if (all_isoquad) return SeqShape::kAllIsoQuadEqualLambda;
  return SeqShape::kIterative;
}

double total_value(const LossSequence& seq, const Vec& w) {
  double v = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) v += seq[i].eval(w);
  return v;
}

Vec minimize_prefix_iterative(const LossSequence& seq, std::size_t prefix,
                              const Domain& domain) {
  auto value = [&](const Vec& w) {
    double v = 0.0;
    for (std::size_t i = 0; i < prefix; ++i) v += seq[i].eval(w);
    return v;
  };
  auto grad = [&](const Vec& w) {
    Vec g = zeros(domain.dimension());
    for (std::size_t i = 0; i < prefix; ++i) {
      Vec gi = seq[i].gradient(w);
      axpy(1.0, gi, g);
    }
    return g;
  };
  return projected_gradient_descent(value, grad, domain,
                                    domain.project(zeros(domain.dimension())),
                                    1e-9, 100000);
}

}  // namespace

Vec projected_gradient_descent(const std::function<double(const Vec&)>& value,
                               const std::function<Vec(const Vec&)>& grad,
                               const Domain& domain, Vec start, double tol,
                               std::size_t max_iters) {
  Vec w = domain.project(std::move(start));
  double step = 1.0;
  double fw = value(w);
  int flat_accepts = 0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    Vec g = grad(w);
    {
      Vec probe = w;
      axpy(-1.0, g, probe);
      if (dist2(domain.project(probe), w) <= tol) return w;
    }
    // Backtracking on the proximal sufficient-decrease condition.
    step = std::min(step * 2.0, 1e12);
    for (;;) {
      Vec cand = w;
      axpy(-step, g, cand);
      cand = domain.project(cand);
      const double fc = value(cand);
      const double move_sq = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
          const double d = cand[i] - w[i];
          s += d * d;
        }
        return s;
      }();
      if (fc <= fw - 0.5 * move_sq / step || step < 1e-18) {
        // No representable progress left: the iterate is at floating-point
        // resolution of the constrained minimizer.
        if (move_sq <= 1e-28 * (1.0 + norm2_sq(w))) return w;
        if (fc >= fw) {
          if (++flat_accepts >= 4) return w;
        } else {
          flat_accepts = 0;
        }
        w = std::move(cand);
        fw = fc;
        break;
      }
      step *= 0.5;
    }
  }
  throw std::runtime_error("projected_gradient_descent: iteration cap reached before tolerance");
}

OfflineOptimum offline_optimum(const LossSequence& seq, const Domain& domain) {
  if (seq.empty()) throw std::invalid_argument("offline_optimum: empty sequence");
  if (seq.dimension() != domain.dimension()) {
    throw std::invalid_argument("offline_optimum: dimension mismatch");
  }
  const std::size_t d = domain.dimension();
  switch (classify(seq)) {
    case SeqShape::kAllLinear: {
      Vec gsum = zeros(d);
      for (std::size_t i = 0; i < seq.size(); ++i) axpy(1.0, seq[i].linear_gradient(), gsum);
      Vec w = domain.linear_minimizer(gsum, zeros(d));
      return {w, total_value(seq, w)};
    }
    case SeqShape::kAllIsoQuadEqualLambda: {
      Vec mean = zeros(d);
      for (std::size_t i = 0; i < seq.size(); ++i) axpy(1.0, seq[i].quad_center(), mean);
      mean = scale(std::move(mean), 1.0 / static_cast<double>(seq.size()));
      Vec w = domain.project(mean);
      return {w, total_value(seq, w)};
    }
    case SeqShape::kIterative: {
      Vec w = minimize_prefix_iterative(seq, seq.size(), domain);
      return {w, total_value(seq, w)};
    }
  }
  throw std::logic_error("offline_optimum: unreachable");
}

std::vector<Vec> leader_sequence(const LossSequence& seq, const Domain& domain) {
  if (seq.empty()) throw std::invalid_argument("leader_sequence: empty sequence");
  if (seq.dimension() != domain.dimension()) {
    throw std::invalid_argument("leader_sequence: dimension mismatch");
  }
  const std::size_t d = domain.dimension();
  std::vector<Vec> leaders;
  leaders.reserve(seq.size());
  switch (classify(seq)) {
    case SeqShape::kAllLinear: {
      Vec gsum = zeros(d);
      for (std::size_t t = 0; t < seq.size(); ++t) {
        axpy(1.0, seq[t].linear_gradient(), gsum);
        if (norm2(gsum) == 0.0 && !leaders.empty()) {
          leaders.push_back(leaders.back());  // tie: retain previous leader
        } else {
          leaders.push_back(domain.linear_minimizer(gsum, zeros(d)));
        }
      }
      break;
    }
    case SeqShape::kAllIsoQuadEqualLambda: {
      Vec csum = zeros(d);
      for (std::size_t t = 0; t < seq.size(); ++t) {
        axpy(1.0, seq[t].quad_center(), csum);
        leaders.push_back(domain.project(scale(csum, 1.0 / static_cast<double>(t + 1))));
      }
      break;
    }
    case SeqShape::kIterative: {
      for (std::size_t t = 1; t <= seq.size(); ++t) {
        leaders.push_back(minimize_prefix_iterative(seq, t, domain));
      }
      break;
    }
  }
  return leaders;
}

bool lipschitz_spot_check(const LossFn& f, const Domain& domain, SplitRng& rng,
                          int num_points) {
  const std::size_t d = domain.dimension();
  for (int i = 0; i < num_points; ++i) {
    Vec x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = rng.normal();
    x = domain.project(x);
    if (norm2(f.gradient(x)) > f.lipschitz() * (1.0 + 1e-9)) return false;
  }
  return true;
}

}  // namespace lazyoco
