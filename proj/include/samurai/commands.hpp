#pragma once

#include "samurai/dataset.hpp"
#include "samurai/mask.hpp"
#include "samurai/metrics.hpp"
#include "samurai/parallel.hpp"
#include "samurai/retrieval.hpp"
#include "samurai/synth.hpp"

#include <filesystem>

namespace samurai {

// Subcommand bodies behind the `samurai` executable. Each one throws
// samurai::Error on failure and never writes to stdout.

struct PreprocessConfig {
  std::filesystem::path root;
  std::filesystem::path out;
  MaskKey key = kQueryMaskKey;
  int padding = kDefaultPadding;
  Connectivity connectivity = Connectivity::Eight;
  ScanOptions scan;
  unsigned workers = default_workers();
};

struct PreprocessSummary {
  std::size_t scenes = 0;
};

/// Writes `<out>/<scene_id>/{crop.png,silhouette.png,preprocess.json}` and
/// `<out>/manifest.json`.
PreprocessSummary cmd_preprocess(const PreprocessConfig& config);

/// Per-scene record written as preprocess.json.
std::string preprocess_record_json(const PreprocessResult& result, const PreprocessConfig& config);

struct RetrieveConfig {
  std::filesystem::path embeddings;
  std::filesystem::path manifest;
  std::filesystem::path out;
  Strategy strategy = Strategy::MajorityVote;
  RetrievalParams params;
  ScanOptions scan;
  unsigned workers = default_workers();
};

struct RetrieveSummary {
  std::size_t scenes = 0;
  RetrievalParams effective;  // after clamping
};

RetrieveSummary cmd_retrieve(const RetrieveConfig& config);

struct EvaluateConfig {
  std::filesystem::path results;
  std::filesystem::path truth;
  std::filesystem::path out;
  bool lenient = false;
};

EvalReport cmd_evaluate(const EvaluateConfig& config);

struct SynthCommandConfig {
  SynthConfig synth;
  std::filesystem::path out;
};

SynthDataset cmd_synth(const SynthCommandConfig& config);

}  // namespace samurai
