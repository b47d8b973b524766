#include "clsvm/features/boxes.hpp"

#include <cmath>

#include "clsvm/core/error.hpp"

namespace clsvm::features {

BoxLayout BoxLayout::around(const Rect& f) {
  BoxLayout layout;
  layout.boxes = {f, Rect{f.x, f.y - f.h, f.w, f.h}, Rect{f.x, f.y + f.h, f.w, f.h},
                  Rect{f.x - f.w, f.y, f.w, f.h}, Rect{f.x + f.w, f.y, f.w, f.h}};
  return layout;
}

Rect rect_from_json(const Json& j, const std::string& what) {
  const Json& arr = j.is_object() ? j.at("face_box") : j;
  if (!arr.is_array() || arr.size() != 4) throw SchemaError(what + ": face box must be [x, y, w, h]");
  Rect r;
  try {
    r = Rect{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(), arr[3].get<double>()};
  } catch (const Json::exception&) {
    throw SchemaError(what + ": face box entries must be numbers");
  }
  return r;
}

Json rect_to_json(const Rect& r) { return Json::array({r.x, r.y, r.w, r.h}); }

Image resample(const Image& image, const Rect& region, std::size_t size) {
  Image out(size, size);
  const double sx = region.w / static_cast<double>(size);
  const double sy = region.h / static_cast<double>(size);
  const double x_max = region.x + region.w - 1.0;
  const double y_max = region.y + region.h - 1.0;
  auto pixel = [&](long x, long y) -> double {
    if (x < 0 || y < 0 || x >= static_cast<long>(image.width) || y >= static_cast<long>(image.height)) return 0.0;
    return image.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  };
  for (std::size_t dy = 0; dy < size; ++dy) {
    double y = region.y + (static_cast<double>(dy) + 0.5) * sy - 0.5;
    y = std::max(region.y, std::min(y_max, y));
    const double fy = std::floor(y);
    const double ty = y - fy;
    for (std::size_t dx = 0; dx < size; ++dx) {
      double x = region.x + (static_cast<double>(dx) + 0.5) * sx - 0.5;
      x = std::max(region.x, std::min(x_max, x));
      const double fx = std::floor(x);
      const double tx = x - fx;
      const long ix = static_cast<long>(fx);
      const long iy = static_cast<long>(fy);
      double v = (1.0 - tx) * (1.0 - ty) * pixel(ix, iy);
      if (tx > 0.0) v += tx * (1.0 - ty) * pixel(ix + 1, iy);
      if (ty > 0.0) v += (1.0 - tx) * ty * pixel(ix, iy + 1);
      if (tx > 0.0 && ty > 0.0) v += tx * ty * pixel(ix + 1, iy + 1);
      out.at(dx, dy) = v;
    }
  }
  return out;
}

std::array<Image, kBoxCount> extract_boxes(const Image& image, const Rect& face_box) {
  if (!(face_box.w > 0.0 && face_box.h > 0.0) || !std::isfinite(face_box.x) || !std::isfinite(face_box.y)) {
    throw ValidationError("face box must have positive, finite area");
  }
  if (image.empty()) throw ValidationError("cannot extract boxes from an empty image");
  const BoxLayout layout = BoxLayout::around(face_box);
  std::array<Image, kBoxCount> patches;
  for (std::size_t i = 0; i < kBoxCount; ++i) patches[i] = resample(image, layout.boxes[i], kPatchSize);
  return patches;
}

}  // namespace clsvm::features
