#pragma once

#include "samurai/dataset.hpp"
#include "samurai/embedding.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace samurai::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("samurai_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Eigen::VectorXf basis(Eigen::Index dim, Eigen::Index axis, float value = 1.0f) {
  Eigen::VectorXf v = Eigen::VectorXf::Zero(dim);
  v(axis) = value;
  return v;
}

inline EmbeddingStore make_store(const std::vector<EmbeddingRecord>& records) {
  EmbeddingStore store(EmbeddingHeader{"test", std::string(kSilhouettePolarity), {}});
  for (const auto& r : records) store.insert(r);
  return store;
}

inline Manifest id_manifest(const std::vector<std::string>& scenes, const std::vector<std::string>& objects) {
  Manifest m;
  for (const auto& s : scenes) m.scenes.push_back({s, {}, {}, "q"});
  for (const auto& o : objects) m.objects.push_back({o, {}});
  return m;
}

}  // namespace samurai::testing
