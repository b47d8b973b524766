#pragma once

// Seeded random instances shared by unit and acceptance tests.

#include <cstdint>

#include "clsvm/core/random.hpp"
#include "clsvm/core/types.hpp"

namespace fixture {

using namespace clsvm;

inline Vector normal_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * standard_normal(rng);
  return v;
}

inline Vector uniform_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

/// Co-occurrence of random binary activations, so M is valid by construction.
inline CooccurrenceMatrix random_cooccurrence(Rng& rng, Eigen::Index n, int rows = 40) {
  Matrix act(rows, n);
  for (int r = 0; r < rows; ++r)
    for (Eigen::Index j = 0; j < n; ++j) act(r, j) = uniform01(rng) < 0.5 ? 1.0 : 0.0;
  return {act.transpose() * act / static_cast<double>(rows)};
}

struct ModelShape {
  Eigen::Index d = 3;
  Eigen::Index n = 2;
  double coupling = 1.0;  // scale of P
};

/// Predictors sized so y_x and y_a fall mostly inside [0, 10] for x ~ N(0, I).
inline CLSVMModel random_model(std::uint64_t seed, const ModelShape& shape = {}) {
  Rng rng(counter_seed(seed, 0xF1, 0));
  CLSVMModel m;
  m.schema = AttributeSchema::generic(static_cast<std::size_t>(shape.n));
  auto& p = m.predictors;
  p.w_xy = normal_vector(rng, shape.d, 1.0);
  p.b_xy = uniform(rng, 3.0, 7.0);
  p.W_xa = Matrix(shape.d, shape.n);
  for (Eigen::Index j = 0; j < shape.n; ++j) p.W_xa.col(j) = normal_vector(rng, shape.d, 0.4);
  p.b_xa = uniform_vector(rng, shape.n, 0.0, 1.0);
  p.w_ay = normal_vector(rng, shape.n, 2.0);
  p.b_ay = uniform(rng, 3.0, 7.0);
  m.params.beta1 = uniform(rng, 0.2, 2.0);
  m.params.beta2 = uniform(rng, 0.2, 2.0);
  m.params.lambda = uniform_vector(rng, shape.n, 0.1, 2.0);
  m.params.P = Matrix(shape.n, shape.n);
  for (Eigen::Index i = 0; i < shape.n; ++i)
    for (Eigen::Index j = 0; j < shape.n; ++j) m.params.P(i, j) = shape.coupling * uniform(rng, -1.0, 1.0);
  m.M = random_cooccurrence(rng, shape.n);
  return m;
}

inline Vector random_x(std::uint64_t seed, Eigen::Index d) {
  Rng rng(counter_seed(seed, 0xF2, 0));
  return normal_vector(rng, d);
}

}  // namespace fixture
