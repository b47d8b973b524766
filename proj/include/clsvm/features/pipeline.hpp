#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"
#include "clsvm/features/boxes.hpp"
#include "clsvm/numerics/pca.hpp"

namespace clsvm::features {

/// Descriptors of one 128 x 128 patch. `gabor` holds the 2x2-pooled
/// magnitudes (40 * 64 * 64 values).
struct RawDescriptors {
  Vector gabor;
  Vector hog;
  Vector lbp;
};

using ImageDescriptors = std::array<RawDescriptors, kBoxCount>;

RawDescriptors describe_patch(const Image& patch);
ImageDescriptors describe_image(const Image& image, const Rect& face_box);

struct PcaDims {
  std::size_t gabor = 200;
  std::size_t hog = 200;
  std::size_t lbp = 40;

  std::size_t per_box() const noexcept { return gabor + hog + lbp; }
};

/// One projection per descriptor type, shared by the five boxes.
struct PcaSet {
  numerics::PcaProjection gabor;
  numerics::PcaProjection hog;
  numerics::PcaProjection lbp;

  std::size_t output_dim() const noexcept {
    return kBoxCount * (gabor.output_dim() + hog.output_dim() + lbp.output_dim());
  }
};

/// Fits each projection on the descriptors of every box of every image.
PcaSet fit_pca_set(const std::vector<ImageDescriptors>& training, const PcaDims& dims);

/// Per box [gabor; hog; lbp] projections, boxes in BoxLayout order.
Vector reduce_and_concat(const ImageDescriptors& descriptors, const PcaSet& pca);

Json pca_set_to_json(const PcaSet& pca);
PcaSet pca_set_from_json(const Json& j);

}  // namespace clsvm::features
