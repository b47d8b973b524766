#include "clsvm/features/hog.hpp"

#include <cmath>
#include <numbers>

#include "clsvm/core/error.hpp"
#include "clsvm/features/boxes.hpp"

namespace clsvm::features {

namespace {

constexpr double kNormEps = 1e-3;

void l2_normalize(Eigen::Ref<Vector> v) {
  const double norm = std::sqrt(v.squaredNorm() + kNormEps * kNormEps);
  v /= norm;
}

}  // namespace

Vector hog_cell_histograms(const Image& patch) {
  if (patch.width != kPatchSize || patch.height != kPatchSize) throw ValidationError("hog: patch must be 128x128");
  using L = HogLayout;
  Vector hist = Vector::Zero(static_cast<Eigen::Index>(L::cells * L::cells * L::bins));
  const std::size_t last = kPatchSize - 1;
  const double bin_width = 180.0 / static_cast<double>(L::bins);
  for (std::size_t y = 0; y < kPatchSize; ++y) {
    for (std::size_t x = 0; x < kPatchSize; ++x) {
      const double gx = patch.at(x == last ? last : x + 1, y) - patch.at(x == 0 ? 0 : x - 1, y);
      const double gy = patch.at(x, y == last ? last : y + 1) - patch.at(x, y == 0 ? 0 : y - 1);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;
      const double pos = angle / bin_width;
      const auto lower = static_cast<std::size_t>(std::floor(pos)) % L::bins;
      const std::size_t upper = (lower + 1) % L::bins;
      const double frac = pos - std::floor(pos);
      const std::size_t cell = (y / L::cell) * L::cells + (x / L::cell);
      hist(static_cast<Eigen::Index>(cell * L::bins + lower)) += mag * (1.0 - frac);
      hist(static_cast<Eigen::Index>(cell * L::bins + upper)) += mag * frac;
    }
  }
  return hist;
}

Vector hog_features(const Image& patch) {
  using L = HogLayout;
  const Vector cells = hog_cell_histograms(patch);
  Vector out(static_cast<Eigen::Index>(L::dim));
  Eigen::Index pos = 0;
  for (std::size_t by = 0; by < L::blocks; ++by) {
    for (std::size_t bx = 0; bx < L::blocks; ++bx) {
      const Eigen::Index start = pos;
      for (std::size_t cy = by; cy < by + 2; ++cy) {
        for (std::size_t cx = bx; cx < bx + 2; ++cx) {
          const auto offset = static_cast<Eigen::Index>((cy * L::cells + cx) * L::bins);
          out.segment(pos, L::bins) = cells.segment(offset, L::bins);
          pos += L::bins;
        }
      }
      auto block = out.segment(start, L::block_dim);
      l2_normalize(block);
      block = block.cwiseMin(L::clip);
      l2_normalize(block);
    }
  }
  return out;
}

}  // namespace clsvm::features
