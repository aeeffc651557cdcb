#pragma once

#include "samurai/dataset.hpp"
#include "samurai/embedding.hpp"
#include "samurai/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace samurai {

/// Planted-ground-truth dataset generator.
///
/// Object vectors are drawn uniformly on the unit sphere, rejection-sampled
/// so any two objects of one modality have cosine <= 1 - 2*noise - margin.
/// Each scene's queries are its target's vectors plus a perturbation of norm
/// exactly `noise`, renormalized. Under that bound the target strictly beats
/// every other object on both modalities.
///
/// With `text_decoys`, each scene additionally gets `decoys_per_scene`
/// objects whose RGB vector sits almost on the text query while their
/// silhouette loses to the target: text-only ranking puts the target at
/// decoys_per_scene + 1, shape still puts it first.
struct SynthConfig {
  std::size_t scenes = 50;
  std::size_t objects = 200;
  std::size_t dim = 64;
  std::uint64_t seed = 7;
  double noise = 0.1;
  bool text_decoys = false;
  std::size_t decoys_per_scene = 2;
  bool rasters = false;
};

inline constexpr double kSynthMargin = 1e-3;
inline constexpr int kSynthRetries = 10000;

struct SynthDataset {
  EmbeddingHeader header;
  std::vector<EmbeddingRecord> records;  // modality order, then id
  GroundTruth truth;
  Manifest manifest;
  std::map<std::string, std::vector<std::string>> decoys;  // scene_id -> decoy object ids
};

/// Throws InvalidArgument for impossible sizes and InfeasibleMargin when the
/// rejection sampler exhausts its retry bound or the final exhaustive check
/// of the planted ranks fails.
SynthDataset synthesize(const SynthConfig& config);

/// Writes embeddings.jsonl, truth.csv and manifest.json under `dir`; with
/// config.rasters also a scenes/ and objects/ tree of PNG fixtures.
void write_synth(const std::filesystem::path& dir, const SynthDataset& data, const SynthConfig& config);

}  // namespace samurai
