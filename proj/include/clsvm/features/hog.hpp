#pragma once

#include "clsvm/core/types.hpp"
#include "clsvm/features/image.hpp"

namespace clsvm::features {

struct HogLayout {
  static constexpr std::size_t cell = 8;
  static constexpr std::size_t bins = 9;
  static constexpr std::size_t cells = 128 / cell;      // per side
  static constexpr std::size_t blocks = cells - 1;      // per side, 2x2 cells, stride 1
  static constexpr std::size_t block_dim = 4 * bins;
  static constexpr std::size_t dim = blocks * blocks * block_dim;  // 8100
  static constexpr double clip = 0.2;
};

/// Per-cell orientation histograms (cells x cells x bins, row-major by cell).
/// Gradients use centered differences with replicated borders. Orientation
/// is unsigned in [0, 180) degrees; bin b is centered at 20 b degrees and
/// each pixel's magnitude is split linearly between the two nearest bins.
Vector hog_cell_histograms(const Image& patch);

/// Blocks of 2 x 2 cells with stride one cell, each L2-Hys normalized
/// (L2, clip at 0.2, L2 again), concatenated by block row then column:
/// 15 * 15 * 36 = 8100 values.
Vector hog_features(const Image& patch);

}  // namespace clsvm::features
