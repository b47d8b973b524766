#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "clsvm/core/types.hpp"

namespace clsvm::numerics {

struct ObjectiveValue {
  double value = 0.0;
  Vector subgradient;
};

using Objective = std::function<ObjectiveValue(const Vector&)>;
using Projection = std::function<Vector(const Vector&)>;

/// eta_t = eta0 / (1 + t / tau)
struct StepRule {
  double eta0 = 0.1;
  double tau = 50.0;

  double at(std::size_t t) const noexcept { return eta0 / (1.0 + static_cast<double>(t) / tau); }
};

struct SubgradientOptions {
  std::size_t steps = 200;
  StepRule step_rule;
  /// Optional per-coordinate multiplier on the step (diagonal preconditioner).
  Vector coordinate_scale;
  /// Stop once the best value has improved by less than
  /// stall_tol * (1 + |best|) over the last stall_window steps. 0 disables.
  double stall_tol = 0.0;
  std::size_t stall_window = 0;
};

struct SubgradientResult {
  Vector best;
  double best_value = 0.0;
  std::size_t best_step = 0;
  std::size_t steps_taken = 0;
  /// best_value after each evaluated iterate, so nonincreasing by construction.
  std::vector<double> best_history;
};

/// Minimizes by z <- project(z - eta_t * g) and returns the lowest-objective
/// iterate seen, including the projected initial point. Throws NumericError
/// if the objective or a subgradient is non-finite.
SubgradientResult projected_subgradient(const Objective& objective, const Vector& init,
                                        const Projection& projection,
                                        const SubgradientOptions& options);

/// Identity projection.
Vector no_projection(const Vector& z);

}  // namespace clsvm::numerics
