#include "clsvm/numerics/box_qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "clsvm/core/error.hpp"
#include "clsvm/core/random.hpp"

namespace clsvm::numerics {

namespace {

Matrix symmetrize(const Matrix& H) { return 0.5 * (H + H.transpose()); }

void check_box(const Vector& g, const Vector& lo, const Vector& hi, Eigen::Index n) {
  if (g.size() != n || lo.size() != n || hi.size() != n) throw SchemaError("box QP: dimension mismatch");
  if (!g.allFinite() || !lo.allFinite() || !hi.allFinite()) throw NumericError("box QP: non-finite input");
  if ((lo.array() > hi.array()).any()) throw ValidationError("box QP: lo > hi");
}

Vector clamp(const Vector& a, const Vector& lo, const Vector& hi) {
  return a.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

BoxQP::BoxQP(Matrix H_in, Vector g_in, Vector lo_in, Vector hi_in)
    : H(symmetrize(H_in)), g(std::move(g_in)), lo(std::move(lo_in)), hi(std::move(hi_in)) {
  if (H.rows() != H.cols()) throw SchemaError("box QP: H must be square");
  if (!H.allFinite()) throw NumericError("box QP: non-finite H");
  check_box(g, lo, hi, H.rows());
}

double BoxQP::objective(const Vector& a) const { return 0.5 * a.dot(H * a) + g.dot(a); }

BoxQpSolver::BoxQpSolver(Matrix H, BoxQpOptions options)
    : H_(symmetrize(H)), options_(options) {
  if (H_.rows() != H_.cols()) throw SchemaError("box QP: H must be square");
  if (!H_.allFinite()) throw NumericError("box QP: non-finite H");
  if (H_.rows() == 0) return;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H_, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  lipschitz_ = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  concave_ = ev(ev.size() - 1) <= 1e-12 * std::max(1.0, lipschitz_);
}

Vector BoxQpSolver::run(const Vector& g, const Vector& lo, const Vector& hi, Vector a,
                        std::size_t& iters) const {
  const Eigen::Index n = H_.rows();
  // A vanishing Hessian degenerates to a linear program; the huge step then
  // lands on the maximizing vertex in one iteration.
  const double L = std::max(lipschitz_, 1e-12);
  Vector grad = H_ * a + g;
  double value = objective(g, a);
  std::vector<int> free;
  free.reserve(static_cast<std::size_t>(n));

  for (std::size_t it = 0; it < options_.max_iter; ++it) {
    ++iters;
    Vector next = clamp(a + grad / L, lo, hi);
    const double moved = (next - a).cwiseAbs().maxCoeff();
    if (moved <= options_.tol) break;
    a = std::move(next);
    grad = H_ * a + g;
    value = objective(g, a);

    free.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool interior = a(i) > lo(i) && a(i) < hi(i);
      const bool leaves_lo = a(i) <= lo(i) && grad(i) > 0.0 && lo(i) < hi(i);
      const bool leaves_hi = a(i) >= hi(i) && grad(i) < 0.0 && lo(i) < hi(i);
      if (interior || leaves_lo || leaves_hi) free.push_back(static_cast<int>(i));
    }
    if (free.empty()) continue;
    const Matrix neg_hff = -H_(free, free);
    Eigen::LLT<Matrix> llt(neg_hff);
    if (llt.info() != Eigen::Success) continue;
    const Vector step = llt.solve(grad(free));
    // Backtrack along the projected Newton path until the objective improves.
    double t = 1.0;
    for (int k = 0; k < 20; ++k, t *= 0.5) {
      Vector candidate = a;
      candidate(free) += t * step;
      candidate = clamp(candidate, lo, hi);
      const double v = objective(g, candidate);
      if (v > value) {
        a = std::move(candidate);
        grad = H_ * a + g;
        value = v;
        break;
      }
    }
  }
  return a;
}

BoxQpResult BoxQpSolver::solve(const Vector& g, const Vector& lo, const Vector& hi,
                               const std::optional<Vector>& init) const {
  const Eigen::Index n = H_.rows();
  check_box(g, lo, hi, n);
  BoxQpResult result;
  result.approximate = !concave_;
  if (init && (init->size() != n || !init->allFinite())) throw SchemaError("box QP: bad initial point");
  Vector start = init ? clamp(*init, lo, hi) : Vector(0.5 * (lo + hi));
  result.argmax = run(g, lo, hi, start, result.iterations);
  result.value = objective(g, result.argmax);
  if (concave_) return result;

  // Best of the restarts; strict improvement keeps the lowest index on ties.
  Rng rng(counter_seed(options_.seed, 0x51, static_cast<std::uint64_t>(n)));
  for (std::size_t r = 0; r < options_.restarts; ++r) {
    Vector a0(n);
    for (Eigen::Index i = 0; i < n; ++i) a0(i) = uniform(rng, lo(i), hi(i));
    Vector a = run(g, lo, hi, a0, result.iterations);
    const double v = objective(g, a);
    if (v > result.value) {
      result.value = v;
      result.argmax = std::move(a);
    }
  }
  return result;
}

BoxQpResult solve_box_qp(const BoxQP& problem, const BoxQpOptions& options,
                         const std::optional<Vector>& init) {
  return BoxQpSolver(problem.H, options).solve(problem.g, problem.lo, problem.hi, init);
}

}  // namespace clsvm::numerics
