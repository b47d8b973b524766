#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace clsvm::features {

/// Grayscale image, row-major, intensities as read (0..maxval).
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), pixels(w * h, fill) {}

  double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
  bool empty() const noexcept { return pixels.empty(); }
};

/// Binary PGM (P5), 8- or 16-bit. Comments in the header are skipped.
Image read_pgm(const std::string& path);
Image parse_pgm(const std::string& bytes, const std::string& what = "pgm");

/// Writes P5 with maxval 255; values are rounded and clamped.
void write_pgm(const std::string& path, const Image& image);

}  // namespace clsvm::features
