#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "clsvm/core/types.hpp"

namespace clsvm::numerics {

/// maximize 0.5 * a'Ha + g'a  subject to  lo <= a <= hi.
struct BoxQP {
  Matrix H;  // symmetrized on construction
  Vector g;
  Vector lo;
  Vector hi;

  BoxQP(Matrix H, Vector g, Vector lo, Vector hi);
  double objective(const Vector& a) const;
};

struct BoxQpOptions {
  std::size_t restarts = 5;  // random starts, used only when H is indefinite
  double tol = 1e-8;
  std::size_t max_iter = 500;
  std::uint64_t seed = 0;
};

struct BoxQpResult {
  Vector argmax;
  double value = 0.0;
  bool approximate = false;  // H indefinite: best of several local solutions
  std::size_t iterations = 0;
};

/// Projected gradient ascent for a fixed Hessian; the linear term and the box
/// vary per solve. The spectrum of H is analysed once at construction, so one
/// solver can be reused across many problems that share H.
///
/// Each iteration takes a 1/L projected gradient step (L = spectral radius of
/// H) and then tries an exact Newton step on the free coordinates when the
/// free block of H is negative definite. A run stops when the projected
/// gradient step moves no coordinate by more than tol.
class BoxQpSolver {
 public:
  explicit BoxQpSolver(Matrix H, BoxQpOptions options = {});

  bool concave() const noexcept { return concave_; }
  double lipschitz() const noexcept { return lipschitz_; }
  const Matrix& hessian() const noexcept { return H_; }
  const BoxQpOptions& options() const noexcept { return options_; }

  BoxQpResult solve(const Vector& g, const Vector& lo, const Vector& hi,
                    const std::optional<Vector>& init = std::nullopt) const;

  double objective(const Vector& g, const Vector& a) const { return 0.5 * a.dot(H_ * a) + g.dot(a); }

 private:
  Vector run(const Vector& g, const Vector& lo, const Vector& hi, Vector a, std::size_t& iters) const;

  Matrix H_;
  BoxQpOptions options_;
  double lipschitz_ = 0.0;
  bool concave_ = true;
};

/// Throws NumericError on non-finite input or ValidationError if lo > hi.
BoxQpResult solve_box_qp(const BoxQP& problem, const BoxQpOptions& options = {},
                         const std::optional<Vector>& init = std::nullopt);

}  // namespace clsvm::numerics
