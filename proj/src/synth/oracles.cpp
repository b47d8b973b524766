#include "clsvm/synth/oracles.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "clsvm/core/error.hpp"

namespace clsvm::synth {

namespace {

constexpr std::size_t kMaxOracleAttributes = 3;

// Everything in the fitness that does not depend on y, for one attribute point.
struct AttributeTerms {
  double score_a = 0.0;   // w_ay'a + b_ay
  double constant = 0.0;  // -sum lambda (a_hat - a)^2 + a'(P .* M)a
};

class ScalarFitness {
 public:
  ScalarFitness(const Vector& x, const CLSVMModel& model) : model_(model) {
    const auto& p = model.predictors;
    n_ = p.w_ay.size();
    score_x_ = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) score_x_ += p.w_xy(k) * x(k);
    score_x_ += p.b_xy;
    attr_hat_.assign(static_cast<std::size_t>(n_), 0.0);
    for (Eigen::Index j = 0; j < n_; ++j) {
      double s = p.b_xa(j);
      for (Eigen::Index k = 0; k < x.size(); ++k) s += p.W_xa(k, j) * x(k);
      attr_hat_[static_cast<std::size_t>(j)] = s;
    }
  }

  AttributeTerms terms(const double* a) const {
    const auto& p = model_.predictors;
    const auto& z = model_.params;
    AttributeTerms t;
    t.score_a = p.b_ay;
    for (Eigen::Index j = 0; j < n_; ++j) {
      t.score_a += p.w_ay(j) * a[j];
      const double r = attr_hat_[static_cast<std::size_t>(j)] - a[j];
      t.constant -= z.lambda(j) * r * r;
      for (Eigen::Index i = 0; i < n_; ++i) t.constant += z.P(i, j) * model_.M.M(i, j) * a[i] * a[j];
    }
    return t;
  }

  double value(const AttributeTerms& t, double y) const {
    const double rx = score_x_ - y;
    const double ra = t.score_a - y;
    return -model_.params.beta1 * rx * rx - model_.params.beta2 * ra * ra + t.constant;
  }

  Eigen::Index attributes() const noexcept { return n_; }

 private:
  const CLSVMModel& model_;
  Eigen::Index n_ = 0;
  double score_x_ = 0.0;
  std::vector<double> attr_hat_;
};

struct Candidate {
  double y;
  double value;
};

// Grid maximum of a concave g on the sorted point set
// {lo} U {k h : lo < k h < hi} U {hi}.
template <class G>
Candidate branch_max(const G& g, double lo, double hi, double h) {
  Candidate best{lo, g(lo)};
  auto consider = [&](double y) {
    if (y < lo || y > hi) return;
    const double v = g(y);
    if (v > best.value) best = {y, v};
  };
  consider(hi);
  if (hi - lo <= 0.0) return best;
  // Peak of the quadratic through three points.
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f0 = g(lo);
  const double f1 = g(mid);
  const double f2 = g(hi);
  const double curvature = f0 - 2.0 * f1 + f2;
  if (!(curvature < 0.0)) return best;
  const double peak = mid + half * (f0 - f2) / (2.0 * curvature);
  const double k = std::floor(peak / h);
  for (double off = -1.0; off <= 2.0; off += 1.0) {
    const double y = (k + off) * h;
    if (y > lo && y < hi) consider(y);
  }
  return best;
}

// Calls fn(a) for every point of {0, h, ..., 1}^n.
template <class Fn>
void for_each_grid_point(Eigen::Index n, double h, Fn&& fn) {
  const auto steps = static_cast<long>(std::llround(1.0 / h));
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  for (;;) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = std::min(1.0, static_cast<double>(idx[static_cast<std::size_t>(j)]) * h);
    }
    fn(a.data());
    Eigen::Index j = 0;
    for (; j < n; ++j) {
      auto& i = idx[static_cast<std::size_t>(j)];
      if (i < steps) {
        ++i;
        break;
      }
      i = 0;
    }
    if (j == n) return;
  }
}

void check_oracle_input(const Vector& x, const CLSVMModel& model, double grid_step) {
  model.validate();
  if (model.predictors.empty()) throw ConfigError("grid oracle: model is untrained");
  if (model.attribute_dim() > kMaxOracleAttributes) {
    throw ValidationError("grid oracle: at most 3 attributes are supported");
  }
  if (static_cast<std::size_t>(x.size()) != model.predictors.feature_dim()) {
    throw ValidationError("grid oracle: feature dimension mismatch");
  }
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw ValidationError("grid oracle: grid_step must lie in (0,1]");
  const double inv = 1.0 / grid_step;
  if (std::abs(inv - std::round(inv)) > 1e-9 * inv) {
    throw ValidationError("grid oracle: 1/grid_step must be an integer");
  }
}

Vector to_vector(const double* a, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = a[j];
  return v;
}

}  // namespace

double oracle_fitness(const Vector& x, const Vector& a, double y, const CLSVMModel& model) {
  ScalarFitness f(x, model);
  return f.value(f.terms(a.data()), y);
}

GridOptimum grid_oracle_fitness(const Vector& x, const CLSVMModel& model, double grid_step) {
  check_oracle_input(x, model, grid_step);
  ScalarFitness f(x, model);
  const double lo = model.score_range.lo;
  const double hi = model.score_range.hi;
  GridOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  for_each_grid_point(f.attributes(), grid_step, [&](const double* a) {
    const AttributeTerms t = f.terms(a);
    const Candidate c = branch_max([&](double y) { return f.value(t, y); }, lo, hi, grid_step);
    if (c.value > best.value) {
      best.value = c.value;
      best.y = c.y;
      best.a = to_vector(a, f.attributes());
    }
  });
  return best;
}

GridOptimum grid_oracle_loss_augmented(const Vector& x, double y_true, const CLSVMModel& model,
                                       double epsilon, double delta_scale, double grid_step) {
  check_oracle_input(x, model, grid_step);
  if (!(epsilon > 0.0) || !(delta_scale >= 0.0)) {
    throw ValidationError("grid oracle: epsilon must be positive and delta_scale nonnegative");
  }
  ScalarFitness f(x, model);
  const double lo = model.score_range.lo;
  const double hi = model.score_range.hi;
  struct Branch {
    double lo, hi;
  };
  std::vector<Branch> branches;
  if (y_true - epsilon >= lo) branches.push_back({lo, y_true - epsilon});
  if (y_true + epsilon <= hi) branches.push_back({y_true + epsilon, hi});
  if (branches.empty()) throw ValidationError("grid oracle: no score is at least epsilon away from y_true");

  GridOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  for_each_grid_point(f.attributes(), grid_step, [&](const double* a) {
    const AttributeTerms t = f.terms(a);
    auto g = [&](double y) { return f.value(t, y) + delta_scale * std::abs(y - y_true); };
    for (const Branch& b : branches) {
      const Candidate c = branch_max(g, b.lo, b.hi, grid_step);
      if (c.value > best.value) {
        best.value = c.value;
        best.y = c.y;
        best.a = to_vector(a, f.attributes());
      }
    }
  });
  return best;
}

}  // namespace clsvm::synth
