#include "samurai/dataset.hpp"

#include "samurai/error.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace samurai {
namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return out;
}

struct Issue {
  std::string id;
  std::string reason;
};

// Returns an empty string when the PNG header is readable.
std::string png_problem(const fs::path& path) {
  if (!fs::is_regular_file(path)) return "missing " + path.filename().string();
  try {
    probe_png(path);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

std::vector<std::string> Manifest::scene_ids() const {
  std::vector<std::string> ids;
  ids.reserve(scenes.size());
  for (const auto& s : scenes) ids.push_back(s.scene_id);
  return ids;
}

std::vector<std::string> Manifest::object_ids() const {
  std::vector<std::string> ids;
  ids.reserve(objects.size());
  for (const auto& o : objects) ids.push_back(o.object_id);
  return ids;
}

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > text.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

std::string read_query_text(const fs::path& path) {
  std::string text = read_file(path);
  if (!is_valid_utf8(text)) throw Error(ErrorCode::Utf8Error, path.string());
  if (!text.empty() && text.back() == '\n') {
    text.pop_back();
    if (!text.empty() && text.back() == '\r') text.pop_back();
  }
  return text;
}

Manifest scan_dataset(const fs::path& root, const ScanOptions& options) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::MissingRoot, "no such directory: " + root.string());
  for (const char* sub : {"scenes", "objects"}) {
    if (!fs::is_directory(root / sub)) {
      throw Error(ErrorCode::MissingRoot, "missing directory: " + (root / sub).string());
    }
  }

  Manifest manifest;
  std::vector<Issue> issues;

  for (const auto& dir : sorted_subdirs(root / "scenes")) {
    SceneEntry entry{dir.filename().string(), dir / options.scene_image_name, dir / options.query_name, {}};
    if (auto problem = png_problem(entry.masked_image_path); !problem.empty()) {
      issues.push_back({entry.scene_id, problem});
      continue;
    }
    if (!fs::is_regular_file(entry.query_path)) {
      issues.push_back({entry.scene_id, "missing " + options.query_name});
      continue;
    }
    try {
      entry.query_text = read_query_text(entry.query_path);
    } catch (const Error& e) {
      issues.push_back({entry.scene_id, e.what()});
      continue;
    }
    if (blank(entry.query_text)) {
      issues.push_back({entry.scene_id, "empty query text"});
      continue;
    }
    manifest.scenes.push_back(std::move(entry));
  }

  for (const auto& dir : sorted_subdirs(root / "objects")) {
    ObjectEntry entry{dir.filename().string(), dir / options.object_image_name};
    if (auto problem = png_problem(entry.rgb_image_path); !problem.empty()) {
      issues.push_back({entry.object_id, problem});
      continue;
    }
    manifest.objects.push_back(std::move(entry));
  }

  if (!issues.empty()) {
    if (!options.lenient) {
      std::ostringstream msg;
      msg << issues.size() << " malformed entr" << (issues.size() == 1 ? "y" : "ies");
      for (const auto& issue : issues) msg << "; " << issue.id << ": " << issue.reason;
      throw Error(ErrorCode::MalformedEntry, msg.str());
    }
    for (const auto& issue : issues) spdlog::warn("skipping {}: {}", issue.id, issue.reason);
  }
  if (manifest.scenes.empty() || manifest.objects.empty()) {
    throw Error(ErrorCode::EmptyDataset, root.string() + ": " + std::to_string(manifest.scenes.size()) +
                                             " scenes, " + std::to_string(manifest.objects.size()) + " objects");
  }
  return manifest;
}

LoadedScene load_scene(const SceneEntry& entry) {
  return {read_png(entry.masked_image_path), read_query_text(entry.query_path)};
}

std::string manifest_to_json(const Manifest& manifest) {
  nlohmann::ordered_json j;
  j["scenes"] = nlohmann::ordered_json::array();
  for (const auto& s : manifest.scenes) {
    j["scenes"].push_back({{"scene_id", s.scene_id},
                           {"masked_image", s.masked_image_path.string()},
                           {"query", s.query_path.string()},
                           {"query_text", s.query_text}});
  }
  j["objects"] = nlohmann::ordered_json::array();
  for (const auto& o : manifest.objects) {
    j["objects"].push_back({{"object_id", o.object_id}, {"image", o.rgb_image_path.string()}});
  }
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
  Manifest manifest;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& s : j.at("scenes")) {
      manifest.scenes.push_back({s.at("scene_id").get<std::string>(), s.value("masked_image", std::string{}),
                                 s.value("query", std::string{}), s.value("query_text", std::string{})});
    }
    for (const auto& o : j.at("objects")) {
      manifest.objects.push_back({o.at("object_id").get<std::string>(), o.value("image", std::string{})});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }

  auto check = [](auto& list, auto id_of, const char* what) {
    std::sort(list.begin(), list.end(), [&](const auto& a, const auto& b) { return id_of(a) < id_of(b); });
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (id_of(list[i]).empty()) throw Error(ErrorCode::ParseError, std::string("empty ") + what + " id");
      if (i > 0 && id_of(list[i]) == id_of(list[i - 1])) {
        throw Error(ErrorCode::DuplicateRecord, std::string(what) + " " + id_of(list[i]));
      }
    }
  };
  check(manifest.scenes, [](const SceneEntry& s) -> const std::string& { return s.scene_id; }, "scene");
  check(manifest.objects, [](const ObjectEntry& o) -> const std::string& { return o.object_id; }, "object");
  if (manifest.scenes.empty() || manifest.objects.empty()) {
    throw Error(ErrorCode::EmptyDataset, "manifest lists no scenes or no objects");
  }
  return manifest;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << manifest_to_json(manifest);
}

Manifest read_manifest(const fs::path& path) { return manifest_from_json(read_file(path)); }

Manifest open_manifest(const fs::path& dir, const ScanOptions& options) {
  if (fs::is_regular_file(dir)) return read_manifest(dir);
  if (fs::is_regular_file(dir / "manifest.json")) return read_manifest(dir / "manifest.json");
  return scan_dataset(dir, options);
}

}  // namespace samurai
