#include "clsvm/latent/potentials.hpp"

#include "clsvm/core/error.hpp"

namespace clsvm::latent {

Vector PotentialVector::flat() const {
  const auto n = phi_xa.size();
  Vector out(2 + n + phi_aa.size());
  out(0) = phi_xy;
  out(1) = phi_ay;
  out.segment(2, n) = phi_xa;
  out.tail(phi_aa.size()) = phi_aa;
  return out;
}

PotentialVector potentials(const Vector& x, const Vector& a, double y,
                           const LinearPredictors& predictors, const CooccurrenceMatrix& M) {
  const auto n = static_cast<Eigen::Index>(predictors.attribute_dim());
  if (x.size() != predictors.w_xy.size()) throw SchemaError("potentials: feature dimension mismatch");
  if (a.size() != n || M.M.rows() != n || M.M.cols() != n) {
    throw SchemaError("potentials: attribute dimension mismatch");
  }
  PotentialVector phi;
  const double rx = predictors.score_from_features(x) - y;
  const double ra = predictors.score_from_attributes(a) - y;
  phi.phi_xy = -rx * rx;
  phi.phi_ay = -ra * ra;
  const Vector residual = predictors.attributes_from_features(x) - a;
  phi.phi_xa = -residual.cwiseProduct(residual);
  const Matrix outer = (a * a.transpose()).cwiseProduct(M.M);
  phi.phi_aa = outer.reshaped();
  return phi;
}

double fitness(const Vector& x, const Vector& a, double y, const CLSVMModel& model) {
  if ((a.array() < 0.0).any() || (a.array() > 1.0).any()) {
    throw ValidationError("fitness: attribute vector outside [0,1]^n");
  }
  const auto& p = model.predictors;
  const auto& z = model.params;
  if (a.size() != z.lambda.size() || x.size() != p.w_xy.size()) {
    throw SchemaError("fitness: dimension mismatch");
  }
  const double rx = p.score_from_features(x) - y;
  const double ra = p.score_from_attributes(a) - y;
  const Vector residual = p.attributes_from_features(x) - a;
  const double coupling = a.dot(z.P.cwiseProduct(model.M.M) * a);
  return -z.beta1 * rx * rx - z.beta2 * ra * ra - z.lambda.dot(residual.cwiseProduct(residual)) + coupling;
}

}  // namespace clsvm::latent
