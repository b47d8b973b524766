#include "clsvm/svr/svr.hpp"

#include <algorithm>
#include <cmath>

#include "clsvm/core/error.hpp"
#include "clsvm/core/parallel.hpp"
#include "clsvm/numerics/subgradient.hpp"

namespace clsvm::svr {

void SvrConfig::validate() const {
  if (!(C > 0.0)) throw ConfigError("svr: C must be positive");
  if (!(epsilon_tube >= 0.0)) throw ConfigError("svr: epsilon_tube must be nonnegative");
  if (!(tol >= 0.0)) throw ConfigError("svr: tol must be nonnegative");
  if (!(eta0 > 0.0) || !(tau > 0.0)) throw ConfigError("svr: step rule needs eta0 > 0 and tau > 0");
}

Json svr_config_to_json(const SvrConfig& c) {
  return {{"C", c.C}, {"epsilon_tube", c.epsilon_tube}, {"max_epochs", c.max_epochs},
          {"tol", c.tol}, {"eta0", c.eta0}, {"tau", c.tau}};
}

SvrConfig svr_config_from_json(const Json& j, SvrConfig base) {
  try {
    base.C = j.value("C", base.C);
    base.epsilon_tube = j.value("epsilon_tube", base.epsilon_tube);
    base.max_epochs = j.value("max_epochs", base.max_epochs);
    base.tol = j.value("tol", base.tol);
    base.eta0 = j.value("eta0", base.eta0);
    base.tau = j.value("tau", base.tau);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("svr config: ") + e.what());
  }
  base.validate();
  return base;
}

double primal_objective(const Matrix& X, const Vector& targets, const Vector& w, double b,
                        double C, double epsilon_tube) {
  const Vector r = targets - (X * w).array().matrix() - Vector::Constant(targets.size(), b);
  const double loss = (r.array().abs() - epsilon_tube).max(0.0).sum();
  return 0.5 * w.squaredNorm() + C * loss;
}

SvrFit train_svr(const Matrix& X, const Vector& targets, const SvrConfig& config) {
  config.validate();
  const Eigen::Index m = X.rows();
  const Eigen::Index d = X.cols();
  if (m < 2) throw ValidationError("train_svr: need at least 2 samples");
  if (targets.size() != m) throw SchemaError("train_svr: target count differs from sample count");
  if (d == 0) throw SchemaError("train_svr: zero-dimensional inputs");
  if (!X.allFinite() || !targets.allFinite()) throw NumericError("train_svr: non-finite data");

  const double scale = 1.0 / (config.C * static_cast<double>(m));
  const double eps = config.epsilon_tube;

  // Optimize over centered inputs: predictions w'(x - mu) + c equal w'x + b
  // with b = c - w'mu, so the objective is unchanged.
  const Vector mu = X.colwise().mean().transpose();
  const Matrix Xc = X.rowwise() - mu.transpose();

  // theta = [w; c]
  auto objective = [&](const Vector& theta) {
    const auto w = theta.head(d);
    const double c = theta(d);
    const Vector r = targets - Xc * w - Vector::Constant(m, c);
    Vector s(m);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double excess = std::abs(r(i)) - eps;
      if (excess > 0.0) {
        loss += excess;
        s(i) = r(i) > 0.0 ? 1.0 : -1.0;
      } else {
        s(i) = 0.0;
      }
    }
    numerics::ObjectiveValue ov;
    ov.value = scale * 0.5 * w.squaredNorm() + loss / static_cast<double>(m);
    ov.subgradient.resize(d + 1);
    ov.subgradient.head(d) = scale * w - (Xc.transpose() * s) / static_cast<double>(m);
    ov.subgradient(d) = -s.sum() / static_cast<double>(m);
    return ov;
  };

  // Diagonal preconditioner from the per-feature variance.
  const Vector variance = Xc.colwise().squaredNorm().transpose() / static_cast<double>(m);
  const double mean_variance = std::max(variance.mean(), 1e-12);
  numerics::SubgradientOptions opts;
  opts.steps = config.max_epochs;
  opts.step_rule = {config.eta0, config.tau};
  opts.coordinate_scale = Vector::Ones(d + 1);
  for (Eigen::Index k = 0; k < d; ++k) {
    opts.coordinate_scale(k) = 1.0 / std::max(variance(k), 1e-3 * mean_variance);
  }
  opts.stall_tol = config.tol * 1e-2;
  opts.stall_window = std::max<std::size_t>(200, config.max_epochs / 5);

  Vector init = Vector::Zero(d + 1);
  std::vector<double> sorted(targets.data(), targets.data() + m);
  std::nth_element(sorted.begin(), sorted.begin() + m / 2, sorted.end());
  init(d) = sorted[static_cast<std::size_t>(m / 2)];

  const auto result = numerics::projected_subgradient(objective, init, numerics::no_projection, opts);

  SvrFit fit;
  fit.w = result.best.head(d);
  fit.b = result.best(d) - fit.w.dot(mu);
  fit.objective = result.best_value / scale;
  fit.best_history.reserve(result.best_history.size());
  for (double v : result.best_history) fit.best_history.push_back(v / scale);
  return fit;
}

SvrFit train_svr(std::span<const Vector> inputs, std::span<const double> targets,
                 const SvrConfig& config) {
  if (inputs.size() != targets.size()) throw SchemaError("train_svr: inputs and targets differ in length");
  if (inputs.empty()) throw ValidationError("train_svr: no samples");
  const auto d = inputs.front().size();
  Matrix X(static_cast<Eigen::Index>(inputs.size()), d);
  Vector t(static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != d) throw SchemaError("train_svr: inconsistent input dimension");
    X.row(static_cast<Eigen::Index>(i)) = inputs[i].transpose();
    t(static_cast<Eigen::Index>(i)) = targets[i];
  }
  return train_svr(X, t, config);
}

AttributeRegressors train_attribute_regressors(const Matrix& X, const Matrix& A,
                                               const SvrConfig& config, std::size_t threads) {
  if (X.rows() != A.rows()) throw SchemaError("train_attribute_regressors: row count mismatch");
  const Eigen::Index n = A.cols();
  AttributeRegressors out;
  out.W.resize(X.cols(), n);
  out.b.resize(n);
  std::vector<SvrFit> fits(static_cast<std::size_t>(n));
  parallel_for(fits.size(), threads, [&](std::size_t j) {
    fits[j] = train_svr(X, A.col(static_cast<Eigen::Index>(j)), config);
  });
  for (Eigen::Index j = 0; j < n; ++j) {
    out.W.col(j) = fits[static_cast<std::size_t>(j)].w;
    out.b(j) = fits[static_cast<std::size_t>(j)].b;
  }
  return out;
}

AttributeRegressors train_attribute_regressors(std::span<const Sample> samples,
                                               const SvrConfig& config, std::size_t threads) {
  return train_attribute_regressors(feature_rows(samples), attribute_rows(samples), config, threads);
}

}  // namespace clsvm::svr
