#pragma once

#include <array>
#include <cstddef>

#include "clsvm/core/json_util.hpp"
#include "clsvm/features/image.hpp"

namespace clsvm::features {

constexpr std::size_t kPatchSize = 128;
constexpr std::size_t kBoxCount = 5;

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool operator==(const Rect&) const = default;
};

/// The face box and its four same-size neighbors flush above, below, left
/// and right of it, in that order.
struct BoxLayout {
  std::array<Rect, kBoxCount> boxes;

  const Rect& face() const noexcept { return boxes[0]; }
  static BoxLayout around(const Rect& face);
};

/// Accepts [x, y, w, h] or {"face_box": [x, y, w, h]}.
Rect rect_from_json(const Json& j, const std::string& what);
Json rect_to_json(const Rect& r);

/// Bilinear resize of `region` to size x size. Destination pixel d maps to
/// source coordinate region.x + (d + 0.5) * region.w / size - 0.5, clamped to
/// the region; pixels outside the image read as zero.
Image resample(const Image& image, const Rect& region, std::size_t size = kPatchSize);

/// Five 128 x 128 patches in BoxLayout order. Throws ValidationError if the
/// face box has no area.
std::array<Image, kBoxCount> extract_boxes(const Image& image, const Rect& face_box);

}  // namespace clsvm::features
