#pragma once

#include "clsvm/core/types.hpp"

namespace clsvm::synth {

struct GridOptimum {
  Vector a;
  double y = 0.0;
  double value = 0.0;
};

/// Exhaustive maximization of the fitness over the grid {0, h, ..., 1}^n x
/// {lo, lo + h, ..., hi}. For each attribute grid point the score is found
/// without scanning the whole score grid: the fitness is a concave quadratic
/// in y, so its grid maximum is one of the grid points next to the peak. The
/// peak is located from three fitness evaluations. Requires n <= 3.
GridOptimum grid_oracle_fitness(const Vector& x, const CLSVMModel& model, double grid_step);

/// Same search for fitness + delta_scale |y_bar - y_true| over the incorrect
/// scores |y_bar - y_true| >= epsilon. The score grid is the regular grid
/// restricted to each branch plus the branch endpoints y_true -/+ epsilon.
GridOptimum grid_oracle_loss_augmented(const Vector& x, double y_true, const CLSVMModel& model,
                                       double epsilon, double delta_scale, double grid_step);

/// Scalar reimplementation of the fitness used by both oracles.
double oracle_fitness(const Vector& x, const Vector& a, double y, const CLSVMModel& model);

}  // namespace clsvm::synth
