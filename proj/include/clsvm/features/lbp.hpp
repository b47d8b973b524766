#pragma once

#include <cstdint>

#include "clsvm/core/types.hpp"
#include "clsvm/features/image.hpp"

namespace clsvm::features {

constexpr std::size_t kLbpBins = 256;

/// 8-neighbor code of interior pixel (x, y). Bit k is set when neighbor k is
/// >= the center; neighbors run clockwise from the top-left:
/// (-1,-1) (0,-1) (1,-1) (1,0) (1,1) (0,1) (-1,1) (-1,0).
std::uint8_t lbp_code(const Image& patch, std::size_t x, std::size_t y);

/// 256-bin histogram of the codes of the 126 x 126 interior pixels of a
/// 128 x 128 patch.
Vector lbp_histogram(const Image& patch);

}  // namespace clsvm::features
