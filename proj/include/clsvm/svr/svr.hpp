#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"

namespace clsvm::svr {

/// Linear epsilon-insensitive support vector regression,
///   min 0.5 |w|^2 + C * sum_i max(0, |y_i - w'x_i - b| - epsilon_tube),
/// with an unregularized bias.
struct SvrConfig {
  double C = 1.0;
  double epsilon_tube = 0.1;  // insensitivity width; unrelated to the C-LSVM label tolerance
  std::size_t max_epochs = 3000;
  double tol = 1e-4;
  double eta0 = 0.1;
  double tau = 50.0;

  void validate() const;
};

Json svr_config_to_json(const SvrConfig& c);
/// Missing keys keep their defaults.
SvrConfig svr_config_from_json(const Json& j, SvrConfig base = {});

struct SvrFit {
  Vector w;
  double b = 0.0;
  double objective = 0.0;            // primal objective at (w, b)
  std::vector<double> best_history;  // best primal objective per epoch

  double predict(const Vector& x) const { return w.dot(x) + b; }
};

double primal_objective(const Matrix& X, const Vector& targets, const Vector& w, double b,
                        double C, double epsilon_tube);

/// Full-batch projected subgradient on the primal, scaled by 1/(C m) so the
/// step rule is independent of the sample count. Weight steps are further
/// divided by the mean squared feature magnitude per dimension (when above 1)
/// so large-valued features do not blow up the iteration. Each epoch is one
/// full subgradient step; the best iterate is returned.
SvrFit train_svr(const Matrix& X, const Vector& targets, const SvrConfig& config);

/// Convenience form over (input, target) pairs.
SvrFit train_svr(std::span<const Vector> inputs, std::span<const double> targets,
                 const SvrConfig& config);

struct AttributeRegressors {
  Matrix W;  // d x n
  Vector b;  // n

  Vector predict(const Vector& x) const { return W.transpose() * x + b; }
};

/// One independent SVR per attribute column of A (m x n).
AttributeRegressors train_attribute_regressors(const Matrix& X, const Matrix& A,
                                               const SvrConfig& config, std::size_t threads = 1);

AttributeRegressors train_attribute_regressors(std::span<const Sample> samples,
                                               const SvrConfig& config, std::size_t threads = 1);

}  // namespace clsvm::svr
