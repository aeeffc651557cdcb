#pragma once

#include "samurai/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace samurai {

enum class Modality { ObjectRgb, ObjectSilhouette, QueryText, QueryShape };

inline constexpr std::array<Modality, 4> kAllModalities{Modality::ObjectRgb, Modality::ObjectSilhouette,
                                                       Modality::QueryText, Modality::QueryShape};

/// The silhouette raster convention shared with the encoder.
inline constexpr std::string_view kSilhouettePolarity = "white_on_black";

std::string_view to_string(Modality modality);
std::optional<Modality> parse_modality(std::string_view name);

struct EmbeddingRecord {
  std::string id;
  Modality modality = Modality::ObjectRgb;
  Eigen::VectorXf vector;
};

struct EmbeddingHeader {
  std::string encoder;
  std::string silhouette{kSilhouettePolarity};
  std::map<Modality, std::size_t> dims;
};

/// v / ||v||, with the norm accumulated in double. Throws ZeroVector.
template <typename Derived>
typename Derived::PlainObject normalize(const Eigen::MatrixBase<Derived>& v) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = static_cast<double>(v(i));
    sq += x * x;
  }
  if (!(sq > 0.0) || !std::isfinite(sq)) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  const double norm = std::sqrt(sq);
  return (v.template cast<double>() / norm).template cast<typename Derived::Scalar>();
}

/// Dot product of two unit vectors, clamped to [-1, 1]. The sum runs in
/// ascending index order through a single accumulator so cosine(a, b) and
/// cosine(b, a) are bit-identical.
template <typename A, typename B>
typename A::Scalar cosine(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cosine of sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += a(i) * static_cast<Scalar>(b(i));
  return std::clamp(acc, Scalar(-1), Scalar(1));
}

/// Unit-normalized vectors keyed by (modality, id). Immutable once loaded.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(EmbeddingHeader header);

  /// Normalizes and stores. Throws DimensionMismatch, DuplicateRecord, ZeroVector.
  void insert(EmbeddingRecord record);

  const Eigen::VectorXf* find(Modality modality, std::string_view id) const;
  /// Throws MissingEmbedding.
  const Eigen::VectorXf& at(Modality modality, std::string_view id) const;
  bool contains(Modality modality, std::string_view id) const { return find(modality, id) != nullptr; }

  std::optional<std::size_t> dim(Modality modality) const;
  std::size_t size(Modality modality) const { return slot(modality).size(); }
  std::vector<std::string> ids(Modality modality) const;

  const EmbeddingHeader& header() const { return header_; }

 private:
  using Slot = std::map<std::string, Eigen::VectorXf, std::less<>>;
  const Slot& slot(Modality m) const { return vectors_[static_cast<std::size_t>(m)]; }

  EmbeddingHeader header_;
  std::array<Slot, 4> vectors_;
  std::array<std::optional<std::size_t>, 4> dims_;
};

/// Line-delimited JSON: one header line, then one record per line.
EmbeddingStore parse_embeddings(std::istream& in);
EmbeddingStore load_embeddings(const std::filesystem::path& path);

std::string format_header(const EmbeddingHeader& header);
std::string format_record(const EmbeddingRecord& record);
void write_embeddings(const std::filesystem::path& path, const EmbeddingHeader& header,
                      const std::vector<EmbeddingRecord>& records);

}  // namespace samurai
