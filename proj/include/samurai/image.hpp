#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>

namespace samurai {

/// Row-major 2D raster; rows = height, cols = width, indexed (y, x).
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-pixel boolean raster. Pixel (x, y) has row-major index y * width + x.
using BinaryMask = Plane<bool>;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit, 3-channel image stored as three planes.
struct RgbImage {
  Plane<std::uint8_t> r;
  Plane<std::uint8_t> g;
  Plane<std::uint8_t> b;

  RgbImage() = default;
  RgbImage(Eigen::Index height, Eigen::Index width, Rgb fill = {})
      : r(Plane<std::uint8_t>::Constant(height, width, fill.r)),
        g(Plane<std::uint8_t>::Constant(height, width, fill.g)),
        b(Plane<std::uint8_t>::Constant(height, width, fill.b)) {}

  Eigen::Index width() const { return r.cols(); }
  Eigen::Index height() const { return r.rows(); }

  Rgb at(Eigen::Index y, Eigen::Index x) const { return {r(y, x), g(y, x), b(y, x)}; }

  void set(Eigen::Index y, Eigen::Index x, Rgb c) {
    r(y, x) = c.r;
    g(y, x) = c.g;
    b(y, x) = c.b;
  }

  void fill_rect(Eigen::Index y0, Eigen::Index x0, Eigen::Index h, Eigen::Index w, Rgb c) {
    r.block(y0, x0, h, w).setConstant(c.r);
    g.block(y0, x0, h, w).setConstant(c.g);
    b.block(y0, x0, h, w).setConstant(c.b);
  }

  friend bool operator==(const RgbImage& a, const RgbImage& b) {
    return a.height() == b.height() && a.width() == b.width() && (a.r == b.r).all() &&
           (a.g == b.g).all() && (a.b == b.b).all();
  }
};

struct PngInfo {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

/// Reads only the PNG header. Throws DecodeError if the file is not a PNG.
PngInfo probe_png(const std::filesystem::path& path);

/// Decodes any PNG into 8-bit RGB. Gray is replicated, palettes expanded, and
/// alpha is dropped without compositing.
RgbImage read_png(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace samurai
