#include "clsvm/features/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "clsvm/core/error.hpp"
#include "clsvm/core/json_util.hpp"

namespace clsvm::features {

namespace {

class HeaderReader {
 public:
  HeaderReader(const std::string& bytes, const std::string& what) : bytes_(bytes), what_(what) {}

  std::size_t next_number() {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw SchemaError(what_ + ": malformed PGM header");
    return std::stoul(bytes_.substr(start, pos_ - start));
  }

  std::string next_token() {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    return bytes_.substr(start, pos_ - start);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw SchemaError(what_ + ": malformed PGM header");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  const std::string& what_;
  std::size_t pos_ = 0;
};

}  // namespace

Image parse_pgm(const std::string& bytes, const std::string& what) {
  HeaderReader header(bytes, what);
  if (header.next_token() != "P5") throw SchemaError(what + ": not a binary PGM (P5)");
  const std::size_t width = header.next_number();
  const std::size_t height = header.next_number();
  const std::size_t maxval = header.next_number();
  if (width == 0 || height == 0) throw SchemaError(what + ": empty image");
  if (maxval == 0 || maxval > 65535) throw SchemaError(what + ": invalid maxval");
  const std::size_t offset = header.raster_offset();
  const std::size_t bytes_per_pixel = maxval < 256 ? 1 : 2;
  if (bytes.size() < offset + width * height * bytes_per_pixel) throw SchemaError(what + ": truncated raster");
  Image img(width, height);
  const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (std::size_t i = 0; i < width * height; ++i) {
    img.pixels[i] = bytes_per_pixel == 1 ? raster[i] : raster[2 * i] * 256.0 + raster[2 * i + 1];
  }
  return img;
}

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes, path);
}

void write_pgm(const std::string& path, const Image& image) {
  std::ostringstream out;
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  std::string raster(image.pixels.size(), '\0');
  std::transform(image.pixels.begin(), image.pixels.end(), raster.begin(), [](double v) {
    return static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L)));
  });
  out << raster;
  write_file_atomic(path, out.str());
}

}  // namespace clsvm::features
