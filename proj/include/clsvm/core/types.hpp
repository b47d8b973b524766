#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clsvm/core/schema.hpp"

namespace clsvm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Lower bound on beta1 and beta2. Keeps both score residuals penalized.
inline constexpr double kBetaFloor = 1e-6;

/// Activation threshold used both for binarizing inferred attributes and for
/// counting co-occurrences.
inline constexpr double kActivationThreshold = 0.5;

struct ScoreRange {
  double lo = 0.0;
  double hi = 10.0;

  double clamp(double y) const noexcept { return y < lo ? lo : (y > hi ? hi : y); }
  bool contains(double y) const noexcept { return y >= lo && y <= hi; }
  bool operator==(const ScoreRange&) const = default;
};

/// One image: feature vector, optional attribute confidences, optional score.
struct Sample {
  std::string id;
  Vector x;
  std::optional<Vector> a;
  std::optional<double> y;
};

/// Throws ValidationError / SchemaError if the sample breaks an invariant.
/// `attributes` is the schema size; `dim` the expected feature dimension
/// (0 to skip that check).
void validate_sample(const Sample& s, std::size_t attributes, std::size_t dim,
                     const ScoreRange& range = {});

/// The three linear predictors: x -> y, x -> a, a -> y.
struct LinearPredictors {
  Vector w_xy;
  double b_xy = 0.0;
  Matrix W_xa;  // d x n
  Vector b_xa;
  Vector w_ay;
  double b_ay = 0.0;

  std::size_t feature_dim() const noexcept { return static_cast<std::size_t>(w_xy.size()); }
  std::size_t attribute_dim() const noexcept { return static_cast<std::size_t>(w_ay.size()); }
  bool empty() const noexcept { return w_xy.size() == 0; }

  double score_from_features(const Vector& x) const { return w_xy.dot(x) + b_xy; }
  double score_from_attributes(const Vector& a) const { return w_ay.dot(a) + b_ay; }
  Vector attributes_from_features(const Vector& x) const { return W_xa.transpose() * x + b_xa; }

  void validate() const;
};

/// Trade-off parameters z = [beta1; beta2; lambda; vec(P)].
///
/// lambda holds the squared diagonal of the attribute weighting matrix, so the
/// attribute residual term is sum_i lambda_i * r_i^2. vec(P) is column-major.
struct TradeoffParams {
  double beta1 = 1.0;
  double beta2 = 1.0;
  Vector lambda;
  Matrix P;

  /// beta1 = beta2 = 1, lambda = 1, P = 0.
  static TradeoffParams initial(std::size_t n);
  static std::size_t flat_size(std::size_t n) noexcept { return 2 + n + n * n; }

  std::size_t attribute_dim() const noexcept { return static_cast<std::size_t>(lambda.size()); }
  Vector to_flat() const;
  /// Validates the invariants of the decoded parameters.
  static TradeoffParams from_flat(const Vector& z, std::size_t n);
  /// Same layout, no invariant checks. For evaluating objectives off the
  /// feasible set.
  static TradeoffParams from_flat_unchecked(const Vector& z, std::size_t n);

  void validate() const;
};

/// Symmetric attribute co-occurrence frequencies in [0, 1].
struct CooccurrenceMatrix {
  Matrix M;

  void validate() const;
};

/// M_ij = fraction of samples with a_i >= 0.5 and a_j >= 0.5.
CooccurrenceMatrix compute_cooccurrence(std::span<const Sample> samples);

struct CLSVMModel {
  LinearPredictors predictors;
  TradeoffParams params;
  CooccurrenceMatrix M;
  AttributeSchema schema = AttributeSchema::default_schema();
  ScoreRange score_range;
  double epsilon = 0.5;  // label tolerance of the structured loss

  std::size_t attribute_dim() const noexcept { return schema.size(); }
  /// Throws if the parts are missing or dimensionally inconsistent.
  void validate() const;
};

/// Stack sample features into an m x d row matrix.
Matrix feature_rows(std::span<const Sample> samples);
/// Stack attribute vectors into an m x n row matrix. Throws if any is absent.
Matrix attribute_rows(std::span<const Sample> samples);
/// Scores as a vector. Throws if any is absent.
Vector score_vector(std::span<const Sample> samples);

}  // namespace clsvm
