#pragma once

#include "samurai/image.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace samurai {

struct SceneEntry {
  std::string scene_id;
  std::filesystem::path masked_image_path;
  std::filesystem::path query_path;
  std::string query_text;

  friend bool operator==(const SceneEntry&, const SceneEntry&) = default;
};

struct ObjectEntry {
  std::string object_id;
  std::filesystem::path rgb_image_path;

  friend bool operator==(const ObjectEntry&, const ObjectEntry&) = default;
};

/// Both lists are sorted ascending by id and free of duplicates.
struct Manifest {
  std::vector<SceneEntry> scenes;
  std::vector<ObjectEntry> objects;

  std::vector<std::string> scene_ids() const;
  std::vector<std::string> object_ids() const;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct ScanOptions {
  std::string scene_image_name = "masked.png";
  std::string query_name = "query.txt";
  std::string object_image_name = "image.png";
  /// Skip malformed entries with a warning instead of failing.
  bool lenient = false;
};

/// Walks `<root>/scenes/*` and `<root>/objects/*`. Every malformed entry is
/// collected; in strict mode a single MalformedEntry error lists them all.
Manifest scan_dataset(const std::filesystem::path& root, const ScanOptions& options = {});

struct LoadedScene {
  RgbImage raster;
  std::string query_text;
};

LoadedScene load_scene(const SceneEntry& entry);

/// Reads a prompt file, validating UTF-8 and stripping one trailing newline.
std::string read_query_text(const std::filesystem::path& path);

bool is_valid_utf8(std::string_view text);

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(std::string_view text);

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

/// `dir/manifest.json` when present, otherwise a dataset scan of `dir`.
Manifest open_manifest(const std::filesystem::path& dir, const ScanOptions& options = {});

}  // namespace samurai
