#include "clsvm/features/lbp.hpp"

#include <array>

#include "clsvm/core/error.hpp"
#include "clsvm/features/boxes.hpp"

namespace clsvm::features {

namespace {
constexpr std::array<int, 8> kDx = {-1, 0, 1, 1, 1, 0, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, -1, 0, 1, 1, 1, 0};
}  // namespace

std::uint8_t lbp_code(const Image& patch, std::size_t x, std::size_t y) {
  const double center = patch.at(x, y);
  unsigned code = 0;
  for (std::size_t k = 0; k < 8; ++k) {
    const auto nx = static_cast<std::size_t>(static_cast<long>(x) + kDx[k]);
    const auto ny = static_cast<std::size_t>(static_cast<long>(y) + kDy[k]);
    if (patch.at(nx, ny) >= center) code |= 1u << k;
  }
  return static_cast<std::uint8_t>(code);
}

Vector lbp_histogram(const Image& patch) {
  if (patch.width != kPatchSize || patch.height != kPatchSize) throw ValidationError("lbp: patch must be 128x128");
  Vector hist = Vector::Zero(kLbpBins);
  for (std::size_t y = 1; y + 1 < kPatchSize; ++y) {
    for (std::size_t x = 1; x + 1 < kPatchSize; ++x) hist(lbp_code(patch, x, y)) += 1.0;
  }
  return hist;
}

}  // namespace clsvm::features
