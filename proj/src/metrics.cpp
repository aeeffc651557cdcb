#include "samurai/metrics.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace samurai {

SceneRanks compute_ranks(std::span<const RankedList> results, const GroundTruth& truth, bool lenient) {
  if (results.empty()) throw Error(ErrorCode::EmptyResults, "no results to evaluate");
  SceneRanks ranks;
  for (const auto& list : results) {
    const auto t = truth.find(list.scene_id);
    if (t == truth.end()) throw Error(ErrorCode::MissingTruth, list.scene_id);
    std::optional<std::size_t> rank;
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      if (list.entries[r].object_id == t->second) {
        rank = r + 1;
        break;
      }
    }
    if (!ranks.emplace(list.scene_id, rank).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate results for scene " + list.scene_id);
    }
  }
  for (const auto& [scene, object] : truth) {
    if (ranks.contains(scene)) continue;
    if (!lenient) throw Error(ErrorCode::UnknownScene, scene + " has ground truth but no results");
    ranks.emplace(scene, std::nullopt);
  }
  return ranks;
}

double recall_at_k(const SceneRanks& ranks, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "recall cutoff must be at least 1");
  if (ranks.empty()) throw Error(ErrorCode::EmptyResults, "no queries");
  std::size_t hits = 0;
  for (const auto& [scene, rank] : ranks) hits += (rank && *rank <= k) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double mrr(const SceneRanks& ranks, std::size_t cutoff) {
  if (ranks.empty()) throw Error(ErrorCode::EmptyResults, "no queries");
  double sum = 0.0;
  for (const auto& [scene, rank] : ranks) {
    if (rank && *rank <= cutoff) sum += 1.0 / static_cast<double>(*rank);
  }
  return sum / static_cast<double>(ranks.size());
}

double recall_at_k(std::span<const RankedList> results, const GroundTruth& truth, std::size_t k, bool lenient) {
  return recall_at_k(compute_ranks(results, truth, lenient), k);
}

double mrr(std::span<const RankedList> results, const GroundTruth& truth, std::size_t cutoff, bool lenient) {
  return mrr(compute_ranks(results, truth, lenient), cutoff);
}

EvalReport evaluate_ranks(SceneRanks ranks) {
  EvalReport report;
  report.num_queries = ranks.size();
  report.recall_at_1 = recall_at_k(ranks, 1);
  report.recall_at_5 = recall_at_k(ranks, 5);
  report.recall_at_10 = recall_at_k(ranks, 10);
  report.mrr = mrr(ranks, kMrrCutoff);
  report.per_scene = std::move(ranks);
  return report;
}

EvalReport evaluate(std::span<const RankedList> results, const GroundTruth& truth, bool lenient) {
  return evaluate_ranks(compute_ranks(results, truth, lenient));
}

std::string report_to_json(const EvalReport& r) {
  std::string out = "{\n";
  out += fmt::format("  \"num_queries\": {},\n", r.num_queries);
  out += fmt::format("  \"recall_at_1\": {:.4f},\n", r.recall_at_1);
  out += fmt::format("  \"recall_at_5\": {:.4f},\n", r.recall_at_5);
  out += fmt::format("  \"recall_at_10\": {:.4f},\n", r.recall_at_10);
  out += fmt::format("  \"mrr\": {:.4f},\n", r.mrr);
  out += "  \"per_scene\": {";
  bool first = true;
  for (const auto& [scene, rank] : r.per_scene) {
    out += first ? "\n" : ",\n";
    first = false;
    out += fmt::format("    {}: {}", nlohmann::json(scene).dump(), rank ? std::to_string(*rank) : "null");
  }
  out += first ? "}\n" : "\n  }\n";
  out += "}\n";
  return out;
}

std::string format_truth_csv(const GroundTruth& truth) {
  std::string out = "scene_id,object_id\n";
  for (const auto& [scene, object] : truth) out += scene + "," + object + "\n";
  return out;
}

GroundTruth parse_truth_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "scene_id,object_id") {
    throw Error(ErrorCode::ParseError, "truth line 1: expected header scene_id,object_id");
  }
  GroundTruth truth;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == line.size() ||
        line.find(',', comma + 1) != std::string::npos) {
      throw Error(ErrorCode::ParseError, fmt::format("truth line {}: expected scene_id,object_id", line_no));
    }
    if (!truth.emplace(line.substr(0, comma), line.substr(comma + 1)).second) {
      throw Error(ErrorCode::DuplicateRecord, fmt::format("truth line {}: scene {} repeated", line_no,
                                                          line.substr(0, comma)));
    }
  }
  return truth;
}

GroundTruth read_truth_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_truth_csv(buf.str());
}

}  // namespace samurai
