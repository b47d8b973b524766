#include "clsvm/numerics/subgradient.hpp"

#include <cmath>

#include "clsvm/core/error.hpp"

namespace clsvm::numerics {

Vector no_projection(const Vector& z) { return z; }

SubgradientResult projected_subgradient(const Objective& objective, const Vector& init,
                                        const Projection& projection,
                                        const SubgradientOptions& options) {
  const bool scaled = options.coordinate_scale.size() > 0;
  if (scaled && options.coordinate_scale.size() != init.size()) {
    throw SchemaError("projected_subgradient: coordinate_scale has the wrong length");
  }
  SubgradientResult result;
  Vector z = projection(init);

  auto evaluate = [&](std::size_t t) {
    ObjectiveValue ov = objective(z);
    if (!std::isfinite(ov.value)) {
      throw NumericError("projected_subgradient: non-finite objective at step " + std::to_string(t));
    }
    if (ov.subgradient.size() != z.size() || !ov.subgradient.allFinite()) {
      throw NumericError("projected_subgradient: invalid subgradient at step " + std::to_string(t));
    }
    if (t == 0 || ov.value < result.best_value) {
      result.best_value = ov.value;
      result.best = z;
      result.best_step = t;
    }
    result.best_history.push_back(result.best_value);
    return ov;
  };

  ObjectiveValue current = evaluate(0);
  for (std::size_t t = 0; t < options.steps; ++t) {
    const double eta = options.step_rule.at(t);
    if (scaled) {
      z = projection(z - eta * options.coordinate_scale.cwiseProduct(current.subgradient));
    } else {
      z = projection(z - eta * current.subgradient);
    }
    current = evaluate(t + 1);
    result.steps_taken = t + 1;

    const std::size_t w = options.stall_window;
    if (options.stall_tol > 0.0 && w > 0 && result.best_history.size() > w) {
      const double before = result.best_history[result.best_history.size() - 1 - w];
      if (before - result.best_value < options.stall_tol * (1.0 + std::abs(result.best_value))) break;
    }
  }
  return result;
}

}  // namespace clsvm::numerics
