#pragma once

#include <cstddef>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"

namespace clsvm::numerics {

/// Affine projection onto the top-k principal directions of a training set.
struct PcaProjection {
  Vector mean;                 // D
  Matrix basis;                // D x k, orthonormal columns
  Vector explained_variance;   // k, nonincreasing

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
  std::size_t output_dim() const noexcept { return static_cast<std::size_t>(basis.cols()); }

  /// basis' (x - mean). Throws SchemaError on a dimension mismatch.
  Vector project(const Vector& x) const;
  Vector reconstruct(const Vector& coords) const;
};

/// Fit on the rows of an m x D matrix. Requires m >= 2 and k <= min(m-1, D).
///
/// Eigendecomposes the D x D covariance when D <= m, otherwise the m x m Gram
/// matrix of the centered rows (same nonzero spectrum, much cheaper for
/// image descriptors). Each basis column's largest-magnitude entry is made
/// positive so the result is reproducible.
PcaProjection fit_pca(const Matrix& rows, std::size_t k);

Json pca_to_json(const PcaProjection& pca);
PcaProjection pca_from_json(const Json& j);

}  // namespace clsvm::numerics
