#pragma once

#include <cstddef>
#include <optional>

#include "clsvm/core/types.hpp"
#include "clsvm/numerics/box_qp.hpp"

namespace clsvm::latent {

struct InferenceOptions {
  numerics::BoxQpOptions qp;
  std::size_t max_rounds = 100;  // block-coordinate rounds
  double tol = 1e-8;             // stop when the fitness changes by less than this
};

struct Prediction {
  double y = 0.0;           // score given the binarized attributes
  Vector a_binary;          // a_confidence >= 0.5
  Vector a_confidence;      // relaxed maximizer over [0,1]^n
  double y_relaxed = 0.0;   // score paired with a_confidence
  double relaxed_fitness = 0.0;
  std::size_t rounds = 0;
};

/// Maximizer of fitness + delta over the attribute box and the incorrect
/// scores |y_bar - y_true| >= epsilon.
struct AugmentedInference {
  Vector a;
  double y = 0.0;
  double value = 0.0;  // fitness(x, a, y) + delta(y_true, y)
};

/// Fitness maximization for one trained model.
///
/// The fitness is quadratic in (a, y) with a Hessian that depends only on the
/// model, so the box-QP solvers (and their spectral analysis) are built once
/// and shared by every sample.
class InferenceEngine {
 public:
  /// Throws if the model is untrained or inconsistent.
  explicit InferenceEngine(CLSVMModel model, InferenceOptions options = {});

  /// Per-sample quantities that do not depend on (a, y).
  struct Context {
    Vector attr_hat;       // W_xa'x + b_xa
    double score_x = 0.0;  // w_xy'x + b_xy
  };

  Context context(const Vector& x) const;
  double fitness(const Context& ctx, const Vector& a, double y) const;

  /// argmax over a in [0,1]^n with y fixed; without y the a->y term is dropped.
  Vector infer_attributes(const Context& ctx, std::optional<double> y,
                          const std::optional<Vector>& init = std::nullopt) const;

  /// argmax over y in [lo, hi] of -beta1 (y_x - y)^2 - beta2 (y_a - y)^2 + slope * y.
  double score_step(const Context& ctx, const Vector& a, double lo, double hi, double slope = 0.0) const;

  /// Block-coordinate ascent over (a, y in [lo, hi]) on fitness + slope * y,
  /// finished by one joint box-QP solve warm-started at the block solution.
  std::pair<Vector, double> maximize_joint(const Context& ctx, double lo, double hi, double slope,
                                           std::size_t* rounds = nullptr) const;

  Prediction predict(const Vector& x) const;
  AugmentedInference loss_augmented(const Vector& x, double y_true, double epsilon,
                                    double delta_scale) const;

  const CLSVMModel& model() const noexcept { return model_; }

 private:
  CLSVMModel model_;
  InferenceOptions options_;
  Matrix coupling_;  // P .* M
  numerics::BoxQpSolver attr_with_score_;
  numerics::BoxQpSolver attr_only_;
  numerics::BoxQpSolver joint_;
};

Vector infer_attributes(const Vector& x, std::optional<double> y, const CLSVMModel& model);

/// (beta1 y_x + beta2 y_a) / (beta1 + beta2), clipped to the score range.
double infer_score_given_attributes(const Vector& x, const Vector& a, const CLSVMModel& model);

/// Relaxed joint maximization, then binarization at 0.5 (ties to 1) and a
/// final score step on the binary attributes.
Prediction predict(const Vector& x, const CLSVMModel& model);

}  // namespace clsvm::latent
