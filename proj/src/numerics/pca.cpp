#include "clsvm/numerics/pca.hpp"

#include <cmath>

#include "clsvm/core/error.hpp"

namespace clsvm::numerics {

namespace {

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

/// Gram-Schmidt completion of columns [from, k) for rank-deficient data.
void complete_basis(Matrix& basis, Eigen::Index from) {
  const Eigen::Index D = basis.rows();
  Eigen::Index candidate = 0;
  for (Eigen::Index c = from; c < basis.cols(); ++c) {
    for (; candidate < D; ++candidate) {
      Vector v = Vector::Unit(D, candidate);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < c; ++j) v -= basis.col(j).dot(v) * basis.col(j);
      }
      const double norm = v.norm();
      if (norm > 1e-6) {
        basis.col(c) = v / norm;
        ++candidate;
        break;
      }
    }
  }
}

}  // namespace

Vector PcaProjection::project(const Vector& x) const {
  if (x.size() != mean.size()) {
    throw SchemaError("PCA projection expects dimension " + std::to_string(mean.size()) + ", got " +
                      std::to_string(x.size()));
  }
  return basis.transpose() * (x - mean);
}

Vector PcaProjection::reconstruct(const Vector& coords) const {
  if (coords.size() != basis.cols()) throw SchemaError("PCA reconstruct: wrong coordinate count");
  return mean + basis * coords;
}

PcaProjection fit_pca(const Matrix& rows, std::size_t k) {
  const Eigen::Index m = rows.rows();
  const Eigen::Index D = rows.cols();
  if (m < 2) throw ValidationError("fit_pca: need at least 2 rows");
  if (k == 0 || static_cast<Eigen::Index>(k) > std::min(m - 1, D)) {
    throw ValidationError("fit_pca: k = " + std::to_string(k) + " exceeds min(m-1, D) = " +
                          std::to_string(std::min(m - 1, D)));
  }
  if (!rows.allFinite()) throw NumericError("fit_pca: non-finite input");
  const auto kk = static_cast<Eigen::Index>(k);

  PcaProjection pca;
  pca.mean = rows.colwise().mean().transpose();
  const Matrix centered = rows.rowwise() - pca.mean.transpose();
  const double denom = static_cast<double>(m - 1);
  pca.basis.resize(D, kk);
  pca.explained_variance.resize(kk);

  if (D <= m) {
    const Matrix cov = (centered.transpose() * centered) / denom;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) throw NumericError("fit_pca: eigendecomposition failed");
    for (Eigen::Index j = 0; j < kk; ++j) {
      const Eigen::Index src = D - 1 - j;  // ascending order from Eigen
      pca.explained_variance(j) = std::max(0.0, eig.eigenvalues()(src));
      pca.basis.col(j) = eig.eigenvectors().col(src);
      fix_sign(pca.basis.col(j));
    }
    return pca;
  }

  const Matrix gram = centered * centered.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericError("fit_pca: eigendecomposition failed");
  const double top = std::max(eig.eigenvalues()(m - 1), 0.0);
  Eigen::Index filled = 0;
  for (Eigen::Index j = 0; j < kk; ++j) {
    const Eigen::Index src = m - 1 - j;
    const double ev = eig.eigenvalues()(src);
    if (!(ev > 1e-12 * top) || top == 0.0) break;
    pca.basis.col(j) = centered.transpose() * eig.eigenvectors().col(src) / std::sqrt(ev);
    pca.basis.col(j).normalize();
    fix_sign(pca.basis.col(j));
    pca.explained_variance(j) = ev / denom;
    filled = j + 1;
  }
  if (filled < kk) {
    complete_basis(pca.basis, filled);
    pca.explained_variance.tail(kk - filled).setZero();
  }
  return pca;
}

Json pca_to_json(const PcaProjection& pca) {
  return {{"mean", vector_to_json(pca.mean)},
          {"basis", matrix_to_json(pca.basis)},
          {"explained_variance", vector_to_json(pca.explained_variance)}};
}

PcaProjection pca_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("basis") || !j.contains("explained_variance")) {
    throw SchemaError("PCA document needs mean, basis and explained_variance");
  }
  PcaProjection p;
  p.mean = vector_from_json(j["mean"], "pca mean");
  p.basis = matrix_from_json(j["basis"], "pca basis");
  p.explained_variance = vector_from_json(j["explained_variance"], "pca explained_variance");
  if (p.basis.rows() != p.mean.size() || p.basis.cols() != p.explained_variance.size()) {
    throw SchemaError("PCA document: inconsistent dimensions");
  }
  return p;
}

}  // namespace clsvm::numerics
