#include "samurai/error.hpp"
#include "samurai/image.hpp"

#include <png.h>

#include <cstring>
#include <vector>

namespace samurai {
namespace {

// RAII guard over libpng's simplified-API control structure.
class PngImage {
 public:
  PngImage() {
    std::memset(&image_, 0, sizeof(image_));
    image_.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image_); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;

  png_image* get() { return &image_; }
  png_image* operator->() { return &image_; }

 private:
  png_image image_;
};

PngImage& begin_read(PngImage& png, const std::filesystem::path& path) {
  if (!png_image_begin_read_from_file(png.get(), path.c_str())) {
    throw Error(ErrorCode::DecodeError, path.string() + ": " + png->message);
  }
  return png;
}

}  // namespace

PngInfo probe_png(const std::filesystem::path& path) {
  PngImage png;
  begin_read(png, path);
  return {png->width, png->height};
}

RgbImage read_png(const std::filesystem::path& path) {
  PngImage png;
  begin_read(png, path);
  png->format = PNG_FORMAT_RGBA;
  const auto width = static_cast<Eigen::Index>(png->width);
  const auto height = static_cast<Eigen::Index>(png->height);
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::DecodeError, path.string() + ": empty raster");
  }
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(*png.get()));
  if (!png_image_finish_read(png.get(), nullptr, buffer.data(), 0, nullptr)) {
    throw Error(ErrorCode::DecodeError, path.string() + ": " + png->message);
  }

  RgbImage image(height, width);
  const png_byte* px = buffer.data();
  for (Eigen::Index y = 0; y < height; ++y) {
    for (Eigen::Index x = 0; x < width; ++x, px += 4) {
      image.set(y, x, {px[0], px[1], px[2]});
    }
  }
  return image;
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  PngImage png;
  png->width = static_cast<png_uint_32>(image.width());
  png->height = static_cast<png_uint_32>(image.height());
  png->format = PNG_FORMAT_RGB;

  std::vector<png_byte> buffer;
  buffer.reserve(static_cast<std::size_t>(image.width() * image.height() * 3));
  for (Eigen::Index y = 0; y < image.height(); ++y) {
    for (Eigen::Index x = 0; x < image.width(); ++x) {
      const Rgb c = image.at(y, x);
      buffer.insert(buffer.end(), {c.r, c.g, c.b});
    }
  }
  if (!png_image_write_to_file(png.get(), path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw Error(ErrorCode::EncodeError, path.string() + ": " + png->message);
  }
}

}  // namespace samurai
