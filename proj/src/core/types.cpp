#include "clsvm/core/types.hpp"

#include <cmath>

#include "clsvm/core/error.hpp"

namespace clsvm {

namespace {

bool all_finite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

}  // namespace

void validate_sample(const Sample& s, std::size_t attributes, std::size_t dim,
                     const ScoreRange& range) {
  const std::string where = "sample '" + s.id + "'";
  if (s.x.size() == 0) throw SchemaError(where + ": empty feature vector");
  if (dim != 0 && static_cast<std::size_t>(s.x.size()) != dim) {
    throw SchemaError(where + ": feature dimension " + std::to_string(s.x.size()) +
                      ", expected " + std::to_string(dim));
  }
  if (!all_finite(s.x)) throw ValidationError(where + ": non-finite feature value");
  if (s.a) {
    if (static_cast<std::size_t>(s.a->size()) != attributes) {
      throw SchemaError(where + ": attribute dimension " + std::to_string(s.a->size()) +
                        ", schema has " + std::to_string(attributes));
    }
    for (Eigen::Index i = 0; i < s.a->size(); ++i) {
      const double v = (*s.a)(i);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(where + ": attribute " + std::to_string(i) + " = " +
                              std::to_string(v) + " outside [0,1]");
      }
    }
  }
  if (s.y && !range.contains(*s.y)) {
    throw ValidationError(where + ": score " + std::to_string(*s.y) + " outside [" +
                          std::to_string(range.lo) + "," + std::to_string(range.hi) + "]");
  }
}

void LinearPredictors::validate() const {
  const auto d = w_xy.size();
  const auto n = w_ay.size();
  if (d == 0) throw ConfigError("linear predictors: empty feature weights (model not trained)");
  if (W_xa.rows() != d || W_xa.cols() != n || b_xa.size() != n) {
    throw SchemaError("linear predictors: W_xa/b_xa dimensions do not match d=" +
                      std::to_string(d) + ", n=" + std::to_string(n));
  }
  if (!all_finite(w_xy) || !all_finite(W_xa) || !all_finite(b_xa) || !all_finite(w_ay) ||
      !std::isfinite(b_xy) || !std::isfinite(b_ay)) {
    throw NumericError("linear predictors: non-finite parameter");
  }
}

TradeoffParams TradeoffParams::initial(std::size_t n) {
  TradeoffParams p;
  p.beta1 = 1.0;
  p.beta2 = 1.0;
  p.lambda = Vector::Ones(static_cast<Eigen::Index>(n));
  p.P = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return p;
}

Vector TradeoffParams::to_flat() const {
  const auto n = lambda.size();
  Vector z(2 + n + n * n);
  z(0) = beta1;
  z(1) = beta2;
  z.segment(2, n) = lambda;
  z.tail(n * n) = P.reshaped();
  return z;
}

TradeoffParams TradeoffParams::from_flat_unchecked(const Vector& z, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  if (static_cast<std::size_t>(z.size()) != flat_size(n)) {
    throw SchemaError("tradeoff vector has length " + std::to_string(z.size()) + ", expected " +
                      std::to_string(flat_size(n)));
  }
  TradeoffParams p;
  p.beta1 = z(0);
  p.beta2 = z(1);
  p.lambda = z.segment(2, nn);
  p.P = z.tail(nn * nn).reshaped(nn, nn);
  return p;
}

TradeoffParams TradeoffParams::from_flat(const Vector& z, std::size_t n) {
  auto p = from_flat_unchecked(z, n);
  p.validate();
  return p;
}

void TradeoffParams::validate() const {
  if (!(beta1 >= kBetaFloor) || !(beta2 >= kBetaFloor)) {
    throw ValidationError("tradeoff params: beta1/beta2 must be >= " + std::to_string(kBetaFloor));
  }
  if (P.rows() != lambda.size() || P.cols() != lambda.size()) {
    throw SchemaError("tradeoff params: P must be n x n with n = |lambda|");
  }
  if (!all_finite(lambda) || !all_finite(P) || !std::isfinite(beta1) || !std::isfinite(beta2)) {
    throw NumericError("tradeoff params: non-finite entry");
  }
  if ((lambda.array() < 0.0).any()) throw ValidationError("tradeoff params: negative lambda");
}

void CooccurrenceMatrix::validate() const {
  if (M.rows() != M.cols()) throw SchemaError("co-occurrence matrix must be square");
  if (!all_finite(M) || (M.array() < 0.0).any() || (M.array() > 1.0).any()) {
    throw ValidationError("co-occurrence matrix entries must lie in [0,1]");
  }
  if (M.size() > 0 && (M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("co-occurrence matrix must be symmetric");
  }
}

CooccurrenceMatrix compute_cooccurrence(std::span<const Sample> samples) {
  if (samples.empty()) throw ValidationError("compute_cooccurrence: empty sample list");
  const Matrix A = attribute_rows(samples);
  const Matrix active = (A.array() >= kActivationThreshold).cast<double>().matrix();
  // Integer counts are exact in double, so the result does not depend on
  // sample order.
  CooccurrenceMatrix c;
  c.M = (active.transpose() * active) / static_cast<double>(samples.size());
  return c;
}

void CLSVMModel::validate() const {
  predictors.validate();
  params.validate();
  M.validate();
  const auto n = schema.size();
  if (predictors.attribute_dim() != n || params.attribute_dim() != n ||
      static_cast<std::size_t>(M.M.rows()) != n) {
    throw SchemaError("model: attribute dimension mismatch against schema (n=" +
                      std::to_string(n) + ")");
  }
  if (!(epsilon > 0.0)) throw ConfigError("model: epsilon must be positive");
  if (!(score_range.lo < score_range.hi)) throw ConfigError("model: empty score range");
}

Matrix feature_rows(std::span<const Sample> samples) {
  if (samples.empty()) return Matrix(0, 0);
  const auto d = samples.front().x.size();
  Matrix X(static_cast<Eigen::Index>(samples.size()), d);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].x.size() != d) {
      throw SchemaError("sample '" + samples[i].id + "': inconsistent feature dimension");
    }
    X.row(static_cast<Eigen::Index>(i)) = samples[i].x.transpose();
  }
  return X;
}

Matrix attribute_rows(std::span<const Sample> samples) {
  if (samples.empty()) return Matrix(0, 0);
  if (!samples.front().a) throw ValidationError("sample '" + samples.front().id + "' has no attributes");
  const auto n = samples.front().a->size();
  Matrix A(static_cast<Eigen::Index>(samples.size()), n);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!s.a) throw ValidationError("sample '" + s.id + "' has no attributes");
    if (s.a->size() != n) throw SchemaError("sample '" + s.id + "': inconsistent attribute dimension");
    A.row(static_cast<Eigen::Index>(i)) = s.a->transpose();
  }
  return A;
}

Vector score_vector(std::span<const Sample> samples) {
  Vector y(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].y) throw ValidationError("sample '" + samples[i].id + "' has no score");
    y(static_cast<Eigen::Index>(i)) = *samples[i].y;
  }
  return y;
}

}  // namespace clsvm
