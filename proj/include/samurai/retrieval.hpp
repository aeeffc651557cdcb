#pragma once

#include "samurai/dataset.hpp"
#include "samurai/embedding.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace samurai {

enum class Strategy {
  TextOnly,
  ShapeOnly,
  TextThenShapeShapeOrder,
  TextThenShapeTextOrder,
  MajorityVote,
};

/// CLI names: text, shape, ts-shape, ts-text, vote.
std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view name);

/// The four strategies fused by MajorityVote, in vote-list order.
inline constexpr std::array<Strategy, 4> kBaseStrategies{Strategy::TextOnly, Strategy::ShapeOnly,
                                                        Strategy::TextThenShapeShapeOrder,
                                                        Strategy::TextThenShapeTextOrder};

enum class HybridOrder { Shape, Text };

struct RankedEntry {
  std::string object_id;
  double score = 0.0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Entries ordered by score descending, ties by object_id ascending.
struct RankedList {
  std::string scene_id;
  Strategy strategy = Strategy::TextOnly;
  std::vector<RankedEntry> entries;

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

struct VoteWeights {
  int text = 1;
  int shape = 1;
  int hybrid_shape = 2;
  int hybrid_text = 2;

  int for_strategy(Strategy s) const;
  friend bool operator==(const VoteWeights&, const VoteWeights&) = default;
};

struct RetrievalParams {
  std::size_t k = 10;  // final list depth
  std::size_t m = 15;  // hybrid text-filter depth
  VoteWeights weights;
};

/// Validates params and clamps k and m to the catalog size, logging any
/// clamp. Throws InvalidArgument for k = 0, k > m, or bad weights.
RetrievalParams clamp_params(const RetrievalParams& params, std::size_t catalog_size);

using Catalog = std::span<const std::string>;

/// Cosine between the query vector and every catalog object, in catalog order.
std::vector<RankedEntry> score_catalog(const Eigen::VectorXf& query, const EmbeddingStore& store,
                                       Modality object_modality, Catalog catalog);

/// Sorts by (score desc, id asc) and keeps the first k.
std::vector<RankedEntry> top_k(std::vector<RankedEntry> scored, std::size_t k);

RankedList rank_text(const EmbeddingStore& store, std::string_view scene_id, Catalog catalog, std::size_t k);
RankedList rank_shape(const EmbeddingStore& store, std::string_view scene_id, Catalog catalog, std::size_t k);

/// Text top-m filter, shape top-k refinement, final ordering by `order`.
/// Reported scores are the final ordering key.
RankedList rank_hybrid(const EmbeddingStore& store, std::string_view scene_id, Catalog catalog,
                       const RetrievalParams& params, HybridOrder order);

using ScoreMap = std::map<std::string, double, std::less<>>;

/// Weighted per-appearance votes over the four base lists (in kBaseStrategies
/// order), tie-broken by weighted Borda points, then text score, then id.
/// The reported score packs votes + borda / 1e6.
RankedList majority_vote(std::span<const RankedList> lists, const VoteWeights& weights,
                         const ScoreMap& text_scores, std::size_t k);

inline constexpr double kBordaScale = 1e6;

RankedList retrieve_scene(const EmbeddingStore& store, std::string_view scene_id, Catalog catalog,
                          const RetrievalParams& params, Strategy strategy);

/// Throws one MissingEmbedding error naming every absent (modality, id) the
/// strategy needs.
void check_coverage(const Manifest& manifest, const EmbeddingStore& store, Strategy strategy);

/// One list per manifest scene, in manifest order. Params must already be clamped.
std::vector<RankedList> retrieve_all(const Manifest& manifest, const EmbeddingStore& store,
                                     const RetrievalParams& params, Strategy strategy, unsigned workers = 1);

/// `scene_id,rank,object_id,score` rows ordered by (scene_id, rank).
std::string format_results_csv(std::span<const RankedList> lists);
void write_results_csv(const std::filesystem::path& path, std::span<const RankedList> lists);
std::vector<RankedList> parse_results_csv(std::string_view text);
std::vector<RankedList> read_results_csv(const std::filesystem::path& path);

}  // namespace samurai
