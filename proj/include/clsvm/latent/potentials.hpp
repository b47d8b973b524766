#pragma once

#include "clsvm/core/types.hpp"

namespace clsvm::latent {

/// The four potential blocks whose inner product with the flattened
/// trade-off vector z reproduces the fitness:
///   phi_xy = -(y_x - y)^2,  phi_ay = -(y_a - y)^2,
///   phi_xa = -(a_x - a) .* (a_x - a),  phi_aa = vec((a a') .* M),
/// where y_x = w_xy'x + b_xy, y_a = w_ay'a + b_ay and a_x = W_xa'x + b_xa.
struct PotentialVector {
  double phi_xy = 0.0;
  double phi_ay = 0.0;
  Vector phi_xa;  // n
  Vector phi_aa;  // n*n, column-major like vec(P)

  /// [phi_xy; phi_ay; phi_xa; phi_aa], aligned with TradeoffParams::to_flat().
  Vector flat() const;
};

PotentialVector potentials(const Vector& x, const Vector& a, double y,
                           const LinearPredictors& predictors, const CooccurrenceMatrix& M);

/// -beta1 (y_x - y)^2 - beta2 (y_a - y)^2 - sum_i lambda_i (a_x - a)_i^2 + a'(P .* M)a.
/// Throws ValidationError if a leaves [0,1]^n.
double fitness(const Vector& x, const Vector& a, double y, const CLSVMModel& model);

}  // namespace clsvm::latent
