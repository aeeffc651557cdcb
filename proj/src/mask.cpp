#include "samurai/mask.hpp"

#include "samurai/error.hpp"

#include <algorithm>
#include <numeric>

namespace samurai {
namespace {

class DisjointSets {
 public:
  int make_set() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

void validate_key(const MaskKey& key) {
  if (key.tolerance < 0 || key.tolerance > 255) {
    throw Error(ErrorCode::InvalidArgument, "mask tolerance must be in 0..255");
  }
}

}  // namespace

BinaryMask extract_mask(const RgbImage& image, const MaskKey& key) {
  validate_key(key);
  auto near = [&](const Plane<std::uint8_t>& channel, std::uint8_t value) {
    return (channel.cast<int>() - static_cast<int>(value)).abs() <= key.tolerance;
  };
  return near(image.r, key.r) && near(image.g, key.g) && near(image.b, key.b);
}

std::vector<Component> connected_components(const BinaryMask& mask, Connectivity connectivity) {
  const Eigen::Index h = mask.rows();
  const Eigen::Index w = mask.cols();
  const bool diagonal = connectivity == Connectivity::Eight;

  Plane<int> labels = Plane<int>::Constant(h, w, -1);
  DisjointSets sets;

  // First pass: provisional labels from the already-visited neighbors.
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      if (!mask(y, x)) continue;
      int label = -1;
      auto visit = [&](Eigen::Index ny, Eigen::Index nx) {
        if (ny < 0 || nx < 0 || nx >= w || !mask(ny, nx)) return;
        if (label < 0) {
          label = labels(ny, nx);
        } else {
          sets.join(label, labels(ny, nx));
        }
      };
      visit(y, x - 1);
      visit(y - 1, x);
      if (diagonal) {
        visit(y - 1, x - 1);
        visit(y - 1, x + 1);
      }
      labels(y, x) = label < 0 ? sets.make_set() : label;
    }
  }

  // Second pass: resolve to roots and gather pixels in raster order.
  std::vector<int> slot_of_root;
  std::vector<Component> components;
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      if (!mask(y, x)) continue;
      const int root = sets.find(labels(y, x));
      if (static_cast<std::size_t>(root) >= slot_of_root.size()) slot_of_root.resize(root + 1, -1);
      if (slot_of_root[root] < 0) {
        slot_of_root[root] = static_cast<int>(components.size());
        components.emplace_back();
      }
      components[slot_of_root[root]].pixels.push_back(y * w + x);
    }
  }

  std::stable_sort(components.begin(), components.end(), [](const Component& a, const Component& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.pixels.front() < b.pixels.front();
  });
  for (std::size_t i = 0; i < components.size(); ++i) components[i].label = static_cast<int>(i) + 1;
  return components;
}

BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity) {
  const auto components = connected_components(mask, connectivity);
  if (components.empty()) throw Error(ErrorCode::EmptyMask, "mask has no set pixels");
  BinaryMask out = BinaryMask::Constant(mask.rows(), mask.cols(), false);
  for (const Eigen::Index idx : components.front().pixels) out(idx / mask.cols(), idx % mask.cols()) = true;
  return out;
}

BBox tight_bbox(const BinaryMask& mask) {
  const auto rows = mask.rowwise().any().eval();
  const auto cols = mask.colwise().any().eval();
  if (!rows.any()) throw Error(ErrorCode::EmptyMask, "mask has no set pixels");

  BBox box;
  while (!rows(box.y0)) ++box.y0;
  box.y1 = rows.size();
  while (!rows(box.y1 - 1)) --box.y1;
  while (!cols(box.x0)) ++box.x0;
  box.x1 = cols.size();
  while (!cols(box.x1 - 1)) --box.x1;
  return box;
}

BBox padded_bbox(const BinaryMask& mask, int padding) {
  if (padding < 0) throw Error(ErrorCode::InvalidArgument, "padding must be non-negative");
  const BBox t = tight_bbox(mask);
  return {std::max<Eigen::Index>(0, t.x0 - padding), std::max<Eigen::Index>(0, t.y0 - padding),
          std::min<Eigen::Index>(mask.cols(), t.x1 + padding), std::min<Eigen::Index>(mask.rows(), t.y1 + padding)};
}

CroppedQuery crop_and_refine(const RgbImage& image, const BBox& bbox, const MaskKey& key, std::string scene_id) {
  if (bbox.x0 < 0 || bbox.y0 < 0 || bbox.x1 > image.width() || bbox.y1 > image.height() || bbox.width() < 1 ||
      bbox.height() < 1) {
    throw Error(ErrorCode::InvalidArgument, "bounding box outside image");
  }
  CroppedQuery out;
  out.scene_id = std::move(scene_id);
  out.crop_rgb.r = image.r.block(bbox.y0, bbox.x0, bbox.height(), bbox.width());
  out.crop_rgb.g = image.g.block(bbox.y0, bbox.x0, bbox.height(), bbox.width());
  out.crop_rgb.b = image.b.block(bbox.y0, bbox.x0, bbox.height(), bbox.width());
  out.refined_mask = extract_mask(out.crop_rgb, key);
  if (!out.refined_mask.any()) {
    throw Error(ErrorCode::EmptyRefinedMask, "no key-colored pixel inside crop" +
                                                 (out.scene_id.empty() ? std::string{} : " of " + out.scene_id));
  }
  return out;
}

RgbImage render_silhouette(const BinaryMask& mask) {
  RgbImage out;
  out.r = mask.cast<std::uint8_t>() * std::uint8_t{255};
  out.g = out.r;
  out.b = out.r;
  return out;
}

PreprocessResult preprocess_scene(const std::string& scene_id, const RgbImage& image, const MaskKey& key,
                                  int padding, Connectivity connectivity) {
  const BinaryMask mask = extract_mask(image, key);
  PreprocessResult result;
  result.mask_popcount = static_cast<std::size_t>(mask.count());
  if (result.mask_popcount == 0) throw Error(ErrorCode::EmptyMask, scene_id + ": no key-colored pixels");

  const auto components = connected_components(mask, connectivity);
  for (const auto& c : components) result.component_sizes.push_back(c.size());
  result.largest_popcount = components.front().size();

  const BinaryMask largest = largest_component(mask, connectivity);
  result.bbox = padded_bbox(largest, padding);
  result.query = crop_and_refine(image, result.bbox, key, scene_id);
  result.refined_popcount = static_cast<std::size_t>(result.query.refined_mask.count());
  return result;
}

}  // namespace samurai
