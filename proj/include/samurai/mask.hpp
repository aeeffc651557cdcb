#pragma once

#include "samurai/image.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace samurai {

/// Key color for the painted-over query region, with a per-channel tolerance.
struct MaskKey {
  std::uint8_t r = 135;
  std::uint8_t g = 206;
  std::uint8_t b = 235;
  int tolerance = 0;  // max absolute per-channel difference, 0..255

  friend bool operator==(const MaskKey&, const MaskKey&) = default;
};

inline constexpr MaskKey kQueryMaskKey{135, 206, 235, 0};
inline constexpr MaskKey kSilhouetteKey{255, 255, 255, 0};
inline constexpr int kDefaultPadding = 10;

enum class Connectivity { Four = 4, Eight = 8 };

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct BBox {
  Eigen::Index x0 = 0;
  Eigen::Index y0 = 0;
  Eigen::Index x1 = 0;
  Eigen::Index y1 = 0;

  Eigen::Index width() const { return x1 - x0; }
  Eigen::Index height() const { return y1 - y0; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Component {
  int label = 0;                       // 1-based position in the sorted list
  std::vector<Eigen::Index> pixels;    // row-major indices, ascending
  std::size_t size() const { return pixels.size(); }
};

struct CroppedQuery {
  std::string scene_id;
  RgbImage crop_rgb;
  BinaryMask refined_mask;
};

BinaryMask extract_mask(const RgbImage& image, const MaskKey& key);

/// Two-pass union-find labeling. Components are sorted by size descending,
/// ties broken by smallest row-major pixel index.
std::vector<Component> connected_components(const BinaryMask& mask, Connectivity connectivity);

/// The first component of connected_components(). Throws EmptyMask.
BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity);

/// Tight bounds of the true pixels. Throws EmptyMask.
BBox tight_bbox(const BinaryMask& mask);

/// Tight bounds grown by `padding` on every side and clamped to the mask.
BBox padded_bbox(const BinaryMask& mask, int padding);

/// Crops `bbox` out of `image` and re-keys the crop. Throws EmptyRefinedMask
/// when no key-colored pixel lies inside the box.
CroppedQuery crop_and_refine(const RgbImage& image, const BBox& bbox, const MaskKey& key,
                             std::string scene_id = {});

/// White where the mask is set, black elsewhere.
RgbImage render_silhouette(const BinaryMask& mask);

struct PreprocessResult {
  CroppedQuery query;
  BBox bbox;
  std::vector<std::size_t> component_sizes;
  std::size_t mask_popcount = 0;
  std::size_t largest_popcount = 0;
  std::size_t refined_popcount = 0;
};

/// Key, keep the largest component, pad and crop, then re-key inside the crop.
PreprocessResult preprocess_scene(const std::string& scene_id, const RgbImage& image, const MaskKey& key,
                                  int padding, Connectivity connectivity);

}  // namespace samurai
