#pragma once

#include "samurai/retrieval.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace samurai {

/// scene_id -> correct object_id
using GroundTruth = std::map<std::string, std::string, std::less<>>;

/// scene_id -> 1-based rank of the correct object, or nullopt when absent.
/// Ordered by scene id so every aggregate is summed in a fixed order.
using SceneRanks = std::map<std::string, std::optional<std::size_t>, std::less<>>;

inline constexpr std::size_t kMrrCutoff = 10;

struct EvalReport {
  std::size_t num_queries = 0;
  double recall_at_1 = 0.0;
  double recall_at_5 = 0.0;
  double recall_at_10 = 0.0;
  double mrr = 0.0;
  SceneRanks per_scene;
};

/// Locates each scene's correct object. Throws EmptyResults, MissingTruth for
/// result scenes without truth, and UnknownScene for truth scenes without
/// results unless `lenient` (they then count as absent).
SceneRanks compute_ranks(std::span<const RankedList> results, const GroundTruth& truth, bool lenient = false);

double recall_at_k(const SceneRanks& ranks, std::size_t k);
double mrr(const SceneRanks& ranks, std::size_t cutoff = kMrrCutoff);

double recall_at_k(std::span<const RankedList> results, const GroundTruth& truth, std::size_t k,
                   bool lenient = false);
double mrr(std::span<const RankedList> results, const GroundTruth& truth, std::size_t cutoff = kMrrCutoff,
           bool lenient = false);

EvalReport evaluate(std::span<const RankedList> results, const GroundTruth& truth, bool lenient = false);
EvalReport evaluate_ranks(SceneRanks ranks);

/// Fixed key order; metrics printed with 4 decimals.
std::string report_to_json(const EvalReport& report);

std::string format_truth_csv(const GroundTruth& truth);
GroundTruth parse_truth_csv(std::string_view text);
GroundTruth read_truth_csv(const std::filesystem::path& path);

}  // namespace samurai
